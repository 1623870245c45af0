#pragma once

#include <complex>

#include "specbox/eigen1d.hpp"

namespace specbox {

enum class ModeND { IntervalFaces, Torus };

/// Spectrum of -Delta + q on a box (interval-faces mode, product trig basis)
/// or on the doubled cell with periodic/antiperiodic extension per dimension
/// (torus mode, complex exponential basis with real symmetric matrix).
struct SpectrumND {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd vectors;          // column n = coefficients in the flat basis
  BoxProblem box;
  ModeND mode = ModeND::IntervalFaces;
  std::vector<Basis1D> bases;           // interval mode
  std::vector<std::vector<int>> freqs;  // torus mode: doubled frequencies per dim
  std::vector<bool> anti;               // torus mode: antiperiodic flag per dim
  std::vector<int> sizes;
  std::vector<Spectrum1D> factors;  // set by separable_spectrum
  double potential_sup = 0.0;
  uint64_t potential_hash = 0;
  int trusted_count = 0;  // 0 means size()/4

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int trusted() const { return trusted_count > 0 ? trusted_count : std::max(1, size() / 4); }
};

inline constexpr int kMatrixCap = 20000;

std::vector<bool> torus_extension_flags(const BoxProblem& box);

Eigen::MatrixXd assemble_interval_nd(const TrigPotential& p, const BoxProblem& box,
                                     const std::vector<int>& K);
Eigen::MatrixXd assemble_torus_nd(const TrigPotential& p, const BoxProblem& box,
                                  const std::vector<int>& K, const std::vector<bool>& anti);

SpectrumND solve_interval_nd(const TrigPotential& p, const BoxProblem& box,
                             const std::vector<int>& K, bool keep_vectors = true);
SpectrumND solve_torus_nd(const TrigPotential& p, const BoxProblem& box,
                          const std::vector<int>& K, const std::vector<bool>& anti,
                          bool keep_vectors = true);

/// k-way merge: the `count` smallest sums picking one entry from each list.
std::vector<double> smallest_sums(const std::vector<std::vector<double>>& lists, int count);

/// Separable fast path: eigenvalues are sums of per-dimension 1D eigenvalues.
SpectrumND separable_spectrum(const std::vector<TrigPotential>& q_i, const BoxProblem& box,
                              int count, int K1d = 128);

double kernel_nd(const SpectrumND& spec, double t, const std::vector<double>& x,
                 const std::vector<double>& y);

/// Basis values at a point (interval mode: real; torus mode: complex),
/// flattened in the same order as the assembly. Used by kernel_nd and by the
/// identity suite's grid evaluations.
void basis_values_interval(const SpectrumND& spec, const std::vector<double>& x,
                           Eigen::VectorXd& out);
void basis_values_torus(const SpectrumND& spec, const std::vector<double>& x,
                        Eigen::VectorXcd& out);

}  // namespace specbox
