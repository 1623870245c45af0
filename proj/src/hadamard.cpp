#include "specbox/hadamard.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace specbox {

namespace {
constexpr double pi = std::numbers::pi;

// 16-point Gauss-Legendre nodes/weights on [0,1]
struct GL16 {
  std::array<double, 16> x{}, w{};
  GL16() {
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      double p1 = 0.0, p0 = 0.0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = z;
        for (int l = 2; l <= n; ++l) {
          double p2 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p0) / l;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      double dp = n * (z * p1 - p0) / (z * z - 1.0);
      x[i] = 0.5 * (1.0 + z);
      w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};
const GL16 gl16;

// composite Gauss-Legendre over [0,1] with enough panels for `wavelengths`
// oscillations across the range
double integrate01(const std::function<double(double)>& f, double wavelengths) {
  int panels = 1 + static_cast<int>(std::ceil(wavelengths));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = static_cast<double>(p) / panels, width = 1.0 / panels;
    for (int i = 0; i < 16; ++i) total += width * gl16.w[i] * f(lo + width * gl16.x[i]);
  }
  return total;
}

// oscillation count of Q along the segment from y to x
double segment_wavelengths(const TrigPotential& p, const std::vector<double>& x,
                           const std::vector<double>& y) {
  double peak = 0.0;
  for (const auto& [m, c] : p.coeffs()) {
    double phase = 0.0;
    for (size_t i = 0; i < m.size(); ++i) phase += m[i] * (x[i] - y[i]) / p.sides()[i];
    peak = std::max(peak, std::abs(phase) / 2.0);
  }
  return peak;
}

std::vector<double> segment_point(const std::vector<double>& x, const std::vector<double>& y,
                                  double s) {
  std::vector<double> z(y.size());
  for (size_t i = 0; i < y.size(); ++i) z[i] = y[i] + s * (x[i] - y[i]);
  return z;
}

// Chebyshev-Lobatto collocation on [A, B]: values at the N+1 nodes
// mid + rad cos(pi j / N) <-> coefficients of sum_k c_k T_k.
std::vector<double> cheb_coeffs(const std::vector<double>& vals) {
  int N = static_cast<int>(vals.size()) - 1;
  std::vector<double> c(N + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    double s = 0.5 * (vals[0] + (k % 2 ? -1.0 : 1.0) * vals[N]);
    for (int j = 1; j < N; ++j) s += vals[j] * std::cos(pi * j * k / N);
    c[k] = 2.0 * s / N;
  }
  c[0] *= 0.5;
  c[N] *= 0.5;
  // chop the roundoff floor so spectral differentiation does not amplify
  // transform noise (which otherwise grows like N^3 per second derivative)
  double peak = 0.0;
  for (double v : c) peak = std::max(peak, std::abs(v));
  for (double& v : c)
    if (std::abs(v) < 1e-13 * peak) v = 0.0;
  return c;
}

// Clenshaw evaluation at t in [-1, 1]
double cheb_eval(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

// coefficients of the derivative; `scale` = 2 / (B - A)
std::vector<double> cheb_diff(const std::vector<double>& c, double scale) {
  int N = static_cast<int>(c.size()) - 1;
  std::vector<double> d(N + 1, 0.0);
  for (int k = N; k >= 1; --k) d[k - 1] = (k + 1 <= N - 1 ? d[k + 1] : 0.0) + 2.0 * k * c[k];
  d[0] *= 0.5;
  for (double& v : d) v *= scale;
  return d;
}

double a_nu_collocation(const TrigPotential& p, int nu, double x, double y, int N) {
  // interval covering x, y and every segment point y + s(u - y); widen tiny
  // hulls so the collocation interval is never degenerate
  double m0 = std::min(x, y), m1 = std::max(x, y);
  double span = std::max(m1 - m0, 0.5 * p.sides()[0]);
  double mid = 0.5 * (m0 + m1), rad = 0.5 * span, A = mid - rad, B = mid + rad;
  double scale = 2.0 / (B - A);
  auto to_t = [&](double u) { return (2.0 * u - A - B) / (B - A); };

  std::vector<double> nodes(N + 1);
  for (int j = 0; j <= N; ++j) nodes[j] = mid + rad * std::cos(pi * j / N);

  double wl_per_len = 0.0;
  for (const auto& [m, c] : p.coeffs())
    wl_per_len = std::max(wl_per_len, std::abs(m[0]) / (2.0 * p.sides()[0]));

  std::vector<double> vals(N + 1);
  for (int j = 0; j <= N; ++j) vals[j] = hadamard_a1(p, {nodes[j]}, {y});
  std::vector<double> g = cheb_coeffs(vals);

  for (int level = 2; level <= nu; ++level) {
    std::vector<double> g2 = cheb_diff(cheb_diff(g, scale), scale);
    std::vector<double> hv(N + 1);
    for (int j = 0; j <= N; ++j) {
      double t = to_t(nodes[j]);
      hv[j] = cheb_eval(g2, t) - p.evaluate({nodes[j]}) * cheb_eval(g, t);
    }
    std::vector<double> h = cheb_coeffs(hv);
    for (int j = 0; j <= N; ++j) {
      double u = nodes[j];
      double wl = wl_per_len * std::abs(u - y);
      vals[j] = integrate01(
          [&](double s) {
            return std::pow(s, level - 1) * cheb_eval(h, to_t(y + s * (u - y)));
          },
          wl);
    }
    g = cheb_coeffs(vals);
  }
  return cheb_eval(g, to_t(x));
}
}  // namespace

double hadamard_a1(const TrigPotential& p, const std::vector<double>& x,
                   const std::vector<double>& y) {
  double wl = segment_wavelengths(p, x, y);
  return -integrate01([&](double s) { return p.evaluate(segment_point(x, y, s)); }, wl);
}

double hadamard_a2(const TrigPotential& p, const std::vector<double>& x,
                   const std::vector<double>& y) {
  TrigPotential lap = p.laplacian();
  double wl = segment_wavelengths(p, x, y);
  double i1 =
      integrate01([&](double s) { return s * (1.0 - s) * lap.evaluate(segment_point(x, y, s)); },
                  wl);
  double i2 = integrate01([&](double s) { return p.evaluate(segment_point(x, y, s)); }, wl);
  return -i1 + 0.5 * i2 * i2;
}

double a_nu_1d(const TrigPotential& p, int nu, double x, double y) {
  if (p.dim() != 1) throw std::invalid_argument("1D potential required");
  if (nu < 0 || nu > 4) throw std::invalid_argument("order must be in [0, 4]");
  if (nu == 0) return 1.0;
  if (nu == 1) return hadamard_a1(p, {x}, {y});
  double prev = a_nu_collocation(p, nu, x, y, 24);
  for (int N = 32; N <= 256; N = N * 3 / 2) {
    double cur = a_nu_collocation(p, nu, x, y, N);
    if (std::abs(cur - prev) <= 1e-9 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("transport recursion refinement did not converge");
}

OddDerivativeReport even_maclaurin_check(const TrigPotential& p, int nu, double c, double b,
                                         double tolerance, double h) {
  auto g = [&](double s) { return a_nu_1d(p, nu, c + b * s, c + s); };
  std::array<double, 7> v{};  // g(-3h) ... g(3h)
  for (int k = -3; k <= 3; ++k) v[k + 3] = g(k * h);
  auto d1 = [&](double hh) { return (g(hh) - g(-hh)) / (2.0 * hh); };
  double d1h = d1(h), d1h2 = d1(0.5 * h);
  double first = (4.0 * d1h2 - d1h) / 3.0;  // Richardson-extrapolated g'(0)
  double third = (-v[5] + 2.0 * v[4] - 2.0 * v[2] + v[1]) / (2.0 * h * h * h);
  double fifth =
      (-v[0] + 4.0 * v[1] - 5.0 * v[2] + 5.0 * v[4] - 4.0 * v[5] + v[6]) / (2.0 * std::pow(h, 5));
  OddDerivativeReport rep;
  rep.magnitudes = {std::abs(first), std::abs(third), std::abs(fifth)};
  rep.tolerance = tolerance;
  rep.pass = rep.magnitudes[0] <= tolerance && rep.magnitudes[1] <= tolerance &&
             rep.magnitudes[2] <= tolerance;
  return rep;
}

std::string hadamard_table_csv(const TrigPotential& p, int nu_max,
                               const std::vector<double>& xs, const std::vector<double>& ys) {
  std::ostringstream os;
  os.precision(12);
  os << "x,y";
  for (int nu = 1; nu <= nu_max; ++nu) os << ",a" << nu;
  os << "\n";
  for (double x : xs) {
    for (double y : ys) {
      os << x << "," << y;
      for (int nu = 1; nu <= nu_max; ++nu) os << "," << a_nu_1d(p, nu, x, y);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace specbox
