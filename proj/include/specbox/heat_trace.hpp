#pragma once

#include <map>

#include "specbox/eigennd.hpp"

namespace specbox {

/// What the tail machinery needs to know about a spectrum: the computed
/// eigenvalues, how many of them are trusted, and the free (q=0) problem per
/// dimension so the undiscretized remainder can be bounded analytically.
struct FreeDim {
  Kind1D kind;
  double length;
  double stiffness = 1.0;
};

struct SpectrumInfo {
  std::vector<double> eigenvalues;
  int trusted = 0;
  std::vector<FreeDim> dims;
  double potential_sup = 0.0;
};

SpectrumInfo spectrum_info(const Spectrum1D& s);
SpectrumInfo spectrum_info(const SpectrumND& s);

struct HeatPoint {
  double t;
  double value;
  double tail_bound;
  bool flagged;  // tail too large relative to value for downstream fits
};
using HeatTraceSeries = std::vector<HeatPoint>;

/// Certified overestimate of the trace contribution of everything outside the
/// trusted range (including modes beyond the discretization), via the min-max
/// bound mu_n >= mu_n^free - sup|q| and explicit free-spectrum theta tails.
double tail_bound(const SpectrumInfo& info, double t);

/// First `count` free eigenvalues (ascending, with multiplicity) of the
/// product of the free 1D problems described by `dims`.
std::vector<double> free_eigenvalues(const std::vector<FreeDim>& dims, int count);

HeatTraceSeries trace_series(const SpectrumInfo& info, const std::vector<double>& t_grid);

/// Log-spaced default fit window [t_min, 8 t_min] with t_min minimal subject
/// to tail_bound <= 1e-9 * value.
std::vector<double> fit_t_grid(const SpectrumInfo& info, int points = 40);

/// Closed-form small-t heat trace coefficients for -Delta + q on the box with
/// its per-face conditions, n = 1, 2, 3. Face terms carry sigma = +1 for
/// Neumann and -1 for Dirichlet; edge terms +1 when the two adjoining faces
/// share a condition type and -1 otherwise; vertex terms (-1)^{#Dirichlet}.
std::map<double, double> predicted_coefficients(const BoxProblem& box, const TrigPotential& p);

struct AsymptoticFit {
  std::vector<double> exponents;
  std::map<double, double> fitted;
  std::map<double, double> stderrs;
  double residual = 0.0;
  double condition = 0.0;
};

AsymptoticFit fit_expansion(const HeatTraceSeries& series, const std::vector<double>& exponents,
                            const std::map<double, double>* subtract_known = nullptr);

struct CompareEntry {
  double exponent;
  double fitted;
  double predicted;
  double abs_dev;
  double rel_dev;
  bool pass;
};

std::vector<CompareEntry> compare_fit(const AsymptoticFit& fit,
                                      const std::map<double, double>& predicted,
                                      double rel_tol, double abs_tol,
                                      const std::vector<double>& exponents = {});

std::string series_csv(const HeatTraceSeries& series);

}  // namespace specbox
