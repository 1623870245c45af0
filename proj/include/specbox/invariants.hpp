#pragma once

#include <string>

#include "specbox/heat_trace.hpp"

namespace specbox {

/// Periodic spectrum along one primitive direction of the decomposition,
/// together with whether the direction carries an unconditional guarantee
/// (all components nonzero, or, from dimension three on, more than one
/// nonzero component).
struct DirectionalInvariant {
  MultiIndex direction;
  std::vector<double> eigenvalues;  // first J
  bool guaranteed = false;
};

struct BundleParams {
  int J = 20;        // eigenvalues kept per 1D invariant
  int K1d = 128;     // 1D basis size
  int K_heat = 32;   // per-dimension basis for the heat-trace fit (2D only)
  int max_radii = 5; // smallest squared radii kept in q_d_sums
  bool with_heat_fit = true;
};

/// The comparable quantities attached to (box, bc, Q): integral of q,
/// directional periodic spectra, coordinate 1D spectra with the inherited
/// face conditions, the grouped sums of int q_d^2 over equal-length lattice
/// vectors, and fitted heat-trace coefficients. All potential-dependent
/// components are computed from the zero-mean normalization; the mean is
/// carried separately in mean_integral.
struct InvariantBundle {
  BoxProblem box;
  BundleParams params;
  double mean_integral = 0.0;  // int_R q
  std::vector<DirectionalInvariant> directional;
  std::vector<std::vector<double>> coordinate;  // per dimension, first J
  std::map<double, double> q_d_sums;            // r^2 -> sum of int_{R0} q_d^2
  AsymptoticFit heat_coeffs;

  std::string to_json() const;
};

InvariantBundle bundle(const TrigPotential& p, const BoxProblem& box,
                       const BundleParams& params = {});

struct ComparisonEntry {
  std::string component;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool match = false;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  bool consistent = false;
  std::string verdict;

  std::string to_json() const;
};

/// Componentwise bundle comparison. Spectra are compared at spectrum_tol,
/// integrals (mean, q_d_sums) at integral_tol, fitted heat coefficients at
/// heat_tol (looser: the fit amplifies spectrum noise by its condition).
ComparisonReport compare_bundles(const InvariantBundle& a, const InvariantBundle& b,
                                 double spectrum_tol = 1e-8, double integral_tol = 1e-10,
                                 double heat_tol = 1e-6);

struct SeparabilityReport {
  bool consistent = false;       // all listed q_d_sums below tolerance
  double worst = 0.0;            // largest q_d_sum seen
  double separating_radius2 = 0; // 0 when consistent
  double tolerance = 0.0;

  std::string to_json() const;
};

/// A potential splitting as q_1(x_1) + ... + q_n(x_n) has every q_d with
/// d free of zero components identically zero; a nonvanishing group sum
/// certifies non-separability and names the radius.
SeparabilityReport separability_diagnosis(const InvariantBundle& b, double tol = 1e-10);

}  // namespace specbox
