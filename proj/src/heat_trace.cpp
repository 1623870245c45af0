#include "specbox/heat_trace.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace specbox {

namespace {
constexpr double pi = std::numbers::pi;

// frequencies of the free 1D problem: w_k = step*(k + offset), k = 0,1,...
// multiplicity mult, plus `zero_modes` eigenvalues at 0
struct FreeLadder {
  double step;
  double offset;
  int mult;
  int zero_modes;
};

FreeLadder ladder(const FreeDim& d) {
  double s = pi / d.length;
  switch (d.kind) {
    case Kind1D::DD: return {s, 1.0, 1, 0};
    case Kind1D::NN: return {s, 1.0, 1, 1};
    case Kind1D::DN:
    case Kind1D::ND: return {s, 0.5, 1, 0};
    case Kind1D::Periodic: return {s, 1.0, 2, 1};
    case Kind1D::Antiperiodic: return {s, 0.5, 2, 0};
  }
  throw std::logic_error("bad kind");
}

// upper bound on sum_{k>=0} e^{-s(k+off)^2}, s > 0
double theta_sum_upper(double s, double off) {
  double total = 0.0;
  int k = 0;
  for (; k < 100000; ++k) {
    double term = std::exp(-s * (k + off) * (k + off));
    total += term;
    if (term < 1e-18 * (total + 1e-300)) break;
  }
  // geometric comparison for the rest: e^{-s(k+off)^2} decays by at least
  // e^{-s(2(k+off)+1)} per step beyond k
  double m = k + 1 + off;
  double head = std::exp(-s * m * m);
  double ratio = std::exp(-s * (2.0 * m + 1.0));
  total += head / (1.0 - ratio);
  return total;
}

// full free theta trace for one dimension (upper bound)
double theta_full(const FreeDim& d, double t) {
  FreeLadder l = ladder(d);
  double s = d.stiffness * l.step * l.step * t;
  return l.zero_modes + l.mult * theta_sum_upper(s, l.offset);
}
}  // namespace

SpectrumInfo spectrum_info(const Spectrum1D& s) {
  SpectrumInfo info;
  info.eigenvalues = s.eigenvalues;
  info.trusted = s.trusted();
  info.dims = {{s.basis.kind, s.basis.length, s.stiffness}};
  info.potential_sup = s.potential_sup;
  return info;
}

SpectrumInfo spectrum_info(const SpectrumND& s) {
  SpectrumInfo info;
  info.eigenvalues = s.eigenvalues;
  info.trusted = s.trusted();
  info.potential_sup = s.potential_sup;
  for (int i = 0; i < s.box.dim(); ++i) {
    Kind1D kind;
    if (s.mode == ModeND::Torus)
      kind = s.anti[i] ? Kind1D::Antiperiodic : Kind1D::Periodic;
    else
      kind = kind_from_bc(s.box.bc[i][0], s.box.bc[i][1]);
    info.dims.push_back({kind, s.box.sides[i], 1.0});
  }
  return info;
}

std::vector<double> free_eigenvalues(const std::vector<FreeDim>& dims, int count) {
  std::vector<std::vector<double>> lists;
  for (const auto& d : dims) {
    FreeLadder l = ladder(d);
    std::vector<double> vals(l.zero_modes, 0.0);
    for (int k = 0; static_cast<int>(vals.size()) < count; ++k) {
      double w = l.step * (k + l.offset);
      for (int m = 0; m < l.mult; ++m) vals.push_back(d.stiffness * w * w);
    }
    vals.resize(count);
    lists.push_back(std::move(vals));
  }
  return smallest_sums(lists, count);
}

double tail_bound(const SpectrumInfo& info, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  // head of the free tail summed directly (avoids cancellation against the
  // full theta product), remainder beyond rank N via
  // sum_{mu >= L} e^{-mu t} <= e^{-L t/2} * Theta(t/2)
  const int extra = 512;
  auto free_vals = free_eigenvalues(info.dims, info.trusted + extra + 1);
  double free_tail = 0.0;
  for (int n = info.trusted + extra - 1; n >= info.trusted; --n)
    free_tail += std::exp(-free_vals[n] * t);
  double full_half = 1.0;
  for (const auto& d : info.dims) full_half *= theta_full(d, 0.5 * t);
  free_tail += std::exp(-free_vals[info.trusted + extra] * 0.5 * t) * full_half;
  // small multiplicative slack so floating-point summation cannot round the
  // mathematical overestimate below the true tail
  return std::exp(info.potential_sup * t) * free_tail * (1.0 + 1e-9);
}

HeatTraceSeries trace_series(const SpectrumInfo& info, const std::vector<double>& t_grid) {
  HeatTraceSeries series;
  double prev = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0) || t <= prev) throw std::invalid_argument("t grid must be positive ascending");
    prev = t;
    double value = 0.0;
    for (int n = info.trusted - 1; n >= 0; --n) value += std::exp(-info.eigenvalues[n] * t);
    double tail = tail_bound(info, t);
    series.push_back({t, value, tail, tail > 1e-8 * value});
  }
  return series;
}

std::vector<double> fit_t_grid(const SpectrumInfo& info, int points) {
  auto ratio = [&](double t) {
    double value = 0.0;
    for (int n = info.trusted - 1; n >= 0; --n) value += std::exp(-info.eigenvalues[n] * t);
    return tail_bound(info, t) / value;
  };
  double t = 1.0;
  while (ratio(t) > 1e-9) {
    t *= 1.25;
    if (t > 1e6) throw std::runtime_error("no reliable fit window");
  }
  while (ratio(t * 0.97) <= 1e-9 && t > 1e-8) t *= 0.97;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = t * std::pow(8.0, i / double(points - 1));
  return grid;
}

namespace {
// n-dimensional cosine-coefficient array with closed-form calculus
struct CosArray {
  std::vector<double> sides;
  std::map<MultiIndex, double> c;

  int dim() const { return static_cast<int>(sides.size()); }

  double integral() const {
    auto it = c.find(MultiIndex(dim(), 0));
    if (it == c.end()) return 0.0;
    double v = it->second;
    for (double a : sides) v *= a;
    return v;
  }

  double integral_sq() const {
    double total = 0.0;
    for (const auto& [m, v] : c) {
      double w = v * v;
      for (int i = 0; i < dim(); ++i) w *= (m[i] == 0 ? sides[i] : sides[i] / 2.0);
      total += w;
    }
    return total;
  }

  // restriction to the face x_i = side * a_i; deriv2 applies d^2/dx_i^2 first
  CosArray restrict_face(int i, int side, bool deriv2 = false) const {
    CosArray out;
    for (int j = 0; j < dim(); ++j)
      if (j != i) out.sides.push_back(sides[j]);
    for (const auto& [m, v] : c) {
      MultiIndex mm;
      for (int j = 0; j < dim(); ++j)
        if (j != i) mm.push_back(m[j]);
      double f = v;
      if (side == 1 && m[i] % 2 == 1) f = -f;
      if (deriv2) {
        double w = m[i] * pi / sides[i];
        f *= -w * w;
      }
      out.c[mm] += f;
    }
    return out;
  }

  double corner_value(const std::vector<int>& side) const {
    double total = 0.0;
    for (const auto& [m, v] : c) {
      double f = v;
      for (int i = 0; i < dim(); ++i)
        if (side[i] == 1 && m[i] % 2 == 1) f = -f;
      total += f;
    }
    return total;
  }
};

double face_sign(const BoxProblem& box, int i, int side) {
  return box.bc[i][side] == Bc::Neumann ? 1.0 : -1.0;
}
}  // namespace

std::map<double, double> predicted_coefficients(const BoxProblem& box, const TrigPotential& p) {
  box.validate();
  const int n = box.dim();
  if (p.dim() != n) throw std::invalid_argument("potential dimension mismatch");
  CosArray q;
  q.sides = box.sides;
  q.c = p.cosine_spec().terms;  // throws if not coordinatewise even

  const double rpi = std::sqrt(pi);
  std::map<double, double> c;

  if (n == 1) {
    double a = box.sides[0];
    double s0 = face_sign(box, 0, 0), s1 = face_sign(box, 0, 1);
    double q0 = q.corner_value({0}), qa = q.corner_value({1});
    double qpp0 = q.restrict_face(0, 0, true).corner_value({});
    double qppa = q.restrict_face(0, 1, true).corner_value({});
    c[-0.5] = a / (2.0 * rpi);
    c[0.0] = (s0 + s1) / 4.0;
    c[0.5] = -q.integral() / (2.0 * rpi);
    c[1.0] = -(s0 * q0 + s1 * qa) / 4.0;
    c[1.5] = q.integral_sq() / (4.0 * rpi);
    c[2.0] = (s0 * (0.5 * q0 * q0 - 0.25 * qpp0) + s1 * (0.5 * qa * qa - 0.25 * qppa)) / 4.0;
    return c;
  }

  // face, edge, vertex bookkeeping shared by n = 2, 3
  struct Face {
    double sign, area, int_q, int_q2, int_qnn;
  };
  std::vector<Face> faces;
  for (int i = 0; i < n; ++i) {
    for (int side = 0; side < 2; ++side) {
      CosArray r = q.restrict_face(i, side);
      double area = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) area *= box.sides[j];
      faces.push_back({face_sign(box, i, side), area, r.integral(), r.integral_sq(),
                       q.restrict_face(i, side, true).integral()});
    }
  }
  double sum_v_eps = 0.0, sum_v_eps_q = 0.0;
  {
    std::vector<int> side(n, 0);
    for (int mask = 0; mask < (1 << n); ++mask) {
      double eps = 1.0;
      for (int i = 0; i < n; ++i) {
        side[i] = (mask >> i) & 1;
        if (box.bc[i][side[i]] == Bc::Dirichlet) eps = -eps;
      }
      sum_v_eps += eps;
      sum_v_eps_q += eps * q.corner_value(side);
    }
  }

  if (n == 2) {
    double sf_area = 0.0, sf_q = 0.0, sf_q2_qnn = 0.0;
    for (const auto& f : faces) {
      sf_area += f.sign * f.area;
      sf_q += f.sign * f.int_q;
      sf_q2_qnn += f.sign * (f.int_q2 / (16.0 * rpi) - f.int_qnn / (32.0 * rpi));
    }
    c[-1.0] = box.volume() / (4.0 * pi);
    c[-0.5] = sf_area / (8.0 * rpi);
    c[0.0] = -q.integral() / (4.0 * pi) + sum_v_eps / 16.0;
    c[0.5] = -sf_q / (8.0 * rpi);
    c[1.0] = q.integral_sq() / (8.0 * pi) - sum_v_eps_q / 16.0;
    c[1.5] = sf_q2_qnn;
    return c;
  }

  // n == 3: add edges
  double se_len = 0.0, se_q = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int si = 0; si < 2; ++si) {
        for (int sj = 0; sj < 2; ++sj) {
          double tau = (box.bc[i][si] == box.bc[j][sj]) ? 1.0 : -1.0;
          int k = 3 - i - j;
          se_len += tau * box.sides[k];
          // restrict twice: first dim j (higher), then dim i, to keep indices valid
          CosArray e = q.restrict_face(j, sj).restrict_face(i, si);
          se_q += tau * e.integral();
        }
      }
    }
  }
  double sf_area = 0.0, sf_q = 0.0, sf_q2_qnn = 0.0;
  for (const auto& f : faces) {
    sf_area += f.sign * f.area;
    sf_q += f.sign * f.int_q;
    sf_q2_qnn += f.sign * (f.int_q2 / (32.0 * pi) - f.int_qnn / (64.0 * pi));
  }
  c[-1.5] = box.volume() / (8.0 * pi * rpi);
  c[-1.0] = sf_area / (16.0 * pi);
  c[-0.5] = -q.integral() / (8.0 * pi * rpi) + se_len / (32.0 * rpi);
  c[0.0] = -sf_q / (16.0 * pi) + sum_v_eps / 64.0;
  c[0.5] = q.integral_sq() / (16.0 * pi * rpi) - se_q / (32.0 * rpi);
  c[1.0] = sf_q2_qnn - sum_v_eps_q / 64.0;
  return c;
}

AsymptoticFit fit_expansion(const HeatTraceSeries& series, const std::vector<double>& exponents,
                            const std::map<double, double>* subtract_known) {
  for (size_t i = 1; i < exponents.size(); ++i)
    if (exponents[i] <= exponents[i - 1])
      throw std::invalid_argument("exponents must be strictly increasing");
  std::vector<const HeatPoint*> pts;
  for (const auto& p : series)
    if (!p.flagged) pts.push_back(&p);
  const int N = static_cast<int>(pts.size());
  const int P = static_cast<int>(exponents.size());
  if (N < 2 * P) throw std::invalid_argument("too few reliable points for the fit");
  Eigen::MatrixXd A(N, P);
  Eigen::VectorXd b(N);
  for (int i = 0; i < N; ++i) {
    double v = pts[i]->value;
    if (subtract_known)
      for (const auto& [e, coeff] : *subtract_known) v -= coeff * std::pow(pts[i]->t, e);
    b(i) = v;
    for (int j = 0; j < P; ++j) A(i, j) = std::pow(pts[i]->t, exponents[j]);
  }
  Eigen::VectorXd scale(P);
  for (int j = 0; j < P; ++j) {
    scale(j) = A.col(j).cwiseAbs().maxCoeff();
    if (scale(j) == 0.0) scale(j) = 1.0;
    A.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double cond = svd.singularValues()(0) / svd.singularValues()(P - 1);
  if (!(cond < 1e10)) throw std::runtime_error("ill-conditioned fit design matrix");
  Eigen::VectorXd x = svd.solve(b);
  AsymptoticFit fit;
  fit.exponents = exponents;
  fit.condition = cond;
  fit.residual = (A * x - b).norm();
  double sigma2 = N > P ? fit.residual * fit.residual / (N - P) : 0.0;
  Eigen::VectorXd inv2 = svd.singularValues().array().square().inverse();
  for (int j = 0; j < P; ++j) {
    fit.fitted[exponents[j]] = x(j) / scale(j);
    double cov = 0.0;
    for (int k = 0; k < P; ++k) cov += svd.matrixV()(j, k) * svd.matrixV()(j, k) * inv2(k);
    fit.stderrs[exponents[j]] = std::sqrt(sigma2 * cov) / scale(j);
  }
  return fit;
}

std::vector<CompareEntry> compare_fit(const AsymptoticFit& fit,
                                      const std::map<double, double>& predicted,
                                      double rel_tol, double abs_tol,
                                      const std::vector<double>& exponents) {
  const std::vector<double>& which = exponents.empty() ? fit.exponents : exponents;
  std::vector<CompareEntry> out;
  for (double e : which) {
    auto itf = fit.fitted.find(e);
    auto itp = predicted.find(e);
    if (itf == fit.fitted.end() || itp == predicted.end())
      throw std::invalid_argument("exponent missing from fit or prediction");
    CompareEntry entry;
    entry.exponent = e;
    entry.fitted = itf->second;
    entry.predicted = itp->second;
    entry.abs_dev = std::abs(entry.fitted - entry.predicted);
    entry.rel_dev = entry.abs_dev / std::max(std::abs(entry.predicted), 1e-300);
    entry.pass = entry.abs_dev <= abs_tol || entry.rel_dev <= rel_tol;
    out.push_back(entry);
  }
  return out;
}

std::string series_csv(const HeatTraceSeries& series) {
  std::ostringstream os;
  os.precision(16);
  os << "t,value,tail_bound\n";
  for (const auto& p : series) os << p.t << "," << p.value << "," << p.tail_bound << "\n";
  return os.str();
}

}  // namespace specbox
