#pragma once

#include <array>

#include "specbox/potential.hpp"

namespace specbox {

/// First transport coefficient a_1(x,y) = -int_0^1 Q(y + s(x-y)) ds.
double hadamard_a1(const TrigPotential& p, const std::vector<double>& x,
                   const std::vector<double>& y);

/// Second transport coefficient
/// a_2(x,y) = -int_0^1 s(1-s) (Laplacian Q)(y+s(x-y)) ds
///            + (1/2) (int_0^1 Q(y+s(x-y)) ds)^2.
double hadamard_a2(const TrigPotential& p, const std::vector<double>& x,
                   const std::vector<double>& y);

/// General transport recursion in one dimension,
/// a_nu = int_0^1 s^{nu-1} [d^2/dx^2 a_{nu-1} - Q a_{nu-1}](y+s(x-y), y) ds,
/// evaluated by Chebyshev collocation with spectral differentiation.
/// Throws if successive refinements fail to agree.
double a_nu_1d(const TrigPotential& p, int nu, double x, double y);

struct OddDerivativeReport {
  std::array<double, 3> magnitudes;  // estimated |g'(0)|, |g'''(0)|, |g^(5)(0)|
  double tolerance;
  bool pass;
};

/// Estimates odd-order Maclaurin derivatives of g(x) = a_nu(c + b x, c + x),
/// which vanish identically when Q is even about 0 and about a.
OddDerivativeReport even_maclaurin_check(const TrigPotential& p, int nu, double c, double b,
                                         double tolerance = 1e-6, double h = 0.4);

/// CSV table of a_1, ..., a_{nu_max} over a 1D (x,y) grid.
std::string hadamard_table_csv(const TrigPotential& p, int nu_max,
                               const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace specbox
