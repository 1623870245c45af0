#pragma once

#include <Eigen/Dense>

#include "specbox/potential.hpp"

namespace specbox {

enum class Kind1D { DD, DN, ND, NN, Periodic, Antiperiodic };

const char* kind_name(Kind1D k);
Kind1D kind_from_bc(Bc left, Bc right);
bool kind_on_doubled_cell(Kind1D k);

/// Orthonormal trigonometric eigenbasis of -d^2/dx^2 for one of the six
/// boundary conditions: interval kinds live on [0,a], Periodic/Antiperiodic
/// on the doubled cell [-a,a]. Atoms are norm * trig(q*pi*x/(2a)) with the
/// frequency q kept as an integer (in units of the half-cell frequency).
struct Basis1D {
  Kind1D kind = Kind1D::DD;
  double length = 1.0;  // a
  int size = 4;         // K

  struct Atom {
    bool is_sin;
    int q;        // doubled frequency: trig(q * pi * x / (2a))
    double norm;
  };

  Atom atom(int j) const;
  double eval(int j, double x) const;
  double free_eigenvalue(int j) const;  // (q*pi/(2a))^2
  double cell_lo() const { return kind_on_doubled_cell(kind) ? -length : 0.0; }
  double cell_hi() const { return length; }
  void validate() const;
};

struct Spectrum1D {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd vectors;          // column n = eigenvector; 0x0 if dropped
  Basis1D basis;
  double stiffness = 1.0;
  double potential_sup = 0.0;  // sup-norm bound on V, for tail bounds
  uint64_t potential_hash = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int trusted() const { return std::max(1, size() / 4); }
  double eigenfunction(int n, double x) const;
};

/// Cosine coefficients v_m of an (automatically even) 1D potential,
/// V(x) = sum_m v_m cos(m pi x / a).
std::vector<double> cosine_coeffs_1d(const TrigPotential& p);

/// Galerkin matrix c * diag(free eigenvalues) + <phi_j, V phi_k>, with the
/// potential block in closed form via product-to-sum identities.
Eigen::MatrixXd assemble_1d(const std::vector<double>& cosine, const Basis1D& basis,
                            double stiffness_scale = 1.0);
Eigen::MatrixXd assemble_1d(const TrigPotential& p, const Basis1D& basis,
                            double stiffness_scale = 1.0);

/// Quadrature fallback used only as a test oracle for the closed forms.
Eigen::MatrixXd assemble_1d_quadrature(const std::vector<double>& cosine,
                                       const Basis1D& basis, double stiffness_scale = 1.0,
                                       int nodes = 64);

Spectrum1D solve_1d(const Eigen::MatrixXd& m, const Basis1D& basis,
                    double stiffness = 1.0, bool keep_vectors = true);
Spectrum1D solve_interval(const TrigPotential& p, Kind1D kind, double a, int K,
                          bool keep_vectors = true);

/// Periodic spectrum of -|delta|^2 d^2/ds^2 + Q_delta(s) on [0,1].
Spectrum1D directional_spectrum(const DirectionalComponent& comp, int K = 128);

/// Heat kernel sum_n e^{-mu_n t} psi_n(x) psi_n(y) over the computed modes.
double kernel_1d(const Spectrum1D& spec, double t, double x, double y);

std::string spectrum_csv(const std::vector<double>& eigenvalues);

}  // namespace specbox
