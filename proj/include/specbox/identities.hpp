#pragma once

#include <string>

#include "specbox/heat_trace.hpp"

namespace specbox {

/// Result of one exact-in-the-continuum kernel or trace identity checked at
/// finite basis size. The residual is a pure truncation/quadrature budget and
/// must shrink under refinement.
struct IdentityReport {
  std::string name;
  std::string samples;     // sample set description
  std::string left_side;   // how the left side was computed
  std::string right_side;  // how the right side was computed
  double residual = 0.0;   // max absolute deviation over the sample set
  double tolerance = 0.0;
  bool pass = false;

  std::string to_json() const;
};

/// Deterministic low-discrepancy points in (0,1)^dim (Halton, bases 2,3,5,7),
/// starting at `start` (skipping index 0).
std::vector<std::vector<double>> halton_points(int count, int dim, int start = 1);

/// Default sample times, in units of a^2.
std::vector<double> default_t_set();

/// Interval heat kernel on [0,a] versus signed images of the kernel on the
/// doubled cell [-a,a] with the matching periodic/antiperiodic extension:
///   G_DD(t,x,y) = G_per(t,x,y)  - G_per(t,-x,y)
///   G_NN(t,x,y) = G_per(t,x,y)  + G_per(t,-x,y)
///   G_DN(t,x,y) = G_anti(t,x,y) - G_anti(t,-x,y)
///   G_ND(t,x,y) = G_anti(t,x,y) + G_anti(t,-x,y)
IdentityReport reflection_identity_1d(const TrigPotential& p, double a, Kind1D kind,
                                      const std::vector<double>& t_set, int points = 25,
                                      int K = 64, double tolerance = 1e-7,
                                      int sample_start = 1);

/// 2D box kernel versus the four signed reflections of the torus kernel on
/// the doubled cell: G_box(t,x,y) = sum_eps s(eps) G_tor(t, eps.x, y),
/// s(eps) = prod_i sigma_i(eps_i), sigma_i(-1) = -1 for a Dirichlet condition
/// at x_i = 0 and +1 for Neumann.
IdentityReport torus_image_identity_2d(const TrigPotential& p, const BoxProblem& box,
                                       const std::vector<double>& t_set, int points = 25,
                                       int K = 16, double tolerance = 1e-6,
                                       int sample_start = 1);

/// Tr_DD + Tr_NN = Tr_per and Tr_DN + Tr_ND = Tr_anti on [0,a] / [-a,a].
IdentityReport trace_pairing_identity(const TrigPotential& p, double a,
                                      const std::vector<double>& t_set, int K = 64,
                                      double tolerance = 1e-8);

/// 4 Tr_box(t) = sum_eps s(eps) int_{R0} G_tor(t, eps.x, x) dx for the
/// all-Dirichlet box, the diagonal integrals by tensor-grid quadrature.
IdentityReport trace_quadrupling_2d(const TrigPotential& p, const BoxProblem& box,
                                    const std::vector<double>& t_set, int K = 16,
                                    double tolerance = 1e-5);

/// For a potential constant along coordinate direction `k`, the 2D periodic
/// kernel factors as a periodized 1D free Gaussian times the 1D periodic
/// kernel of the transverse potential. The potential is reduced along k
/// internally.
IdentityReport factorization_identity(const TrigPotential& p, const BoxProblem& box,
                                      const MultiIndex& k, const std::vector<double>& t_set,
                                      int points = 25, int K = 16, double tolerance = 1e-8,
                                      int sample_start = 1);

/// Telescoped trace identity on [-b,b]: Tr_per minus the two diagonal line
/// integrals int_{-b}^{b} (1/2)[G_per + G_anti](t,-x,x) dx and
/// int_{-b}^{b} (1/2)[G_per + G_anti](t,b-x,b+x) dx equals twice the
/// Dirichlet trace on [0,b].
IdentityReport telescoped_dirichlet_trace(const TrigPotential& q2, double b,
                                          const std::vector<double>& t_set, int K = 64,
                                          double tolerance = 1e-7);

std::string suite_json(const std::vector<IdentityReport>& reports);
bool suite_pass(const std::vector<IdentityReport>& reports);

}  // namespace specbox
