#include "specbox/identities.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace specbox {

using json = nlohmann::json;
namespace {
constexpr double pi = std::numbers::pi;

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

double heat_sum(const std::vector<double>& evals, double t) {
  double s = 0.0;
  for (double e : evals) s += std::exp(-e * t);
  return s;
}

void require_tail(SpectrumInfo info, const std::vector<double>& t_set, double tolerance) {
  // the identity holds exactly within the computed space, so the relevant
  // truncation is everything beyond the full computed sum; a residual claim
  // below `tolerance` is meaningful only if that truncation is smaller still
  info.trusted = static_cast<int>(info.eigenvalues.size());
  for (double t : t_set)
    if (tail_bound(info, t) > tolerance)
      throw std::invalid_argument("truncation tail too large at t=" + std::to_string(t));
}

std::string sample_desc(int points, const std::vector<double>& t_set) {
  std::ostringstream os;
  os << points << " Halton points x " << t_set.size() << " times {";
  for (size_t i = 0; i < t_set.size(); ++i) os << (i ? "," : "") << t_set[i];
  os << "}";
  return os.str();
}

void finish(IdentityReport& rep) { rep.pass = rep.residual <= rep.tolerance; }

// periodized free heat kernel on a circle of circumference 2a
double periodized_gaussian(double dx, double t, double a) {
  double s = 0.0;
  for (int m = -20; m <= 20; ++m) {
    double u = dx + 2.0 * m * a;
    s += std::exp(-u * u / (4.0 * t));
  }
  return s / std::sqrt(4.0 * pi * t);
}
}  // namespace

std::string IdentityReport::to_json() const {
  json j;
  j["name"] = name;
  j["samples"] = samples;
  j["left_side"] = left_side;
  j["right_side"] = right_side;
  j["residual"] = residual;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j.dump(2);
}

std::vector<std::vector<double>> halton_points(int count, int dim, int start) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("halton_points supports dim 1..4");
  static const int bases[4] = {2, 3, 5, 7};
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (int i = 0; i < count; ++i)
    for (int d = 0; d < dim; ++d) out[i][d] = halton(start + i, bases[d]);
  return out;
}

std::vector<double> default_t_set() { return {0.05, 0.1, 0.2}; }

IdentityReport reflection_identity_1d(const TrigPotential& p, double a, Kind1D kind,
                                      const std::vector<double>& t_set, int points, int K,
                                      double tolerance, int sample_start) {
  if (kind_on_doubled_cell(kind)) throw std::invalid_argument("interval condition expected");
  bool anti = (kind == Kind1D::DN || kind == Kind1D::ND);
  bool plus = (kind == Kind1D::NN || kind == Kind1D::ND);
  // the interval side is over-resolved so the residual measures the doubled-
  // cell truncation (with exactly matched bases the discrete identity is an
  // algebraic identity and the residual would sit at the roundoff floor)
  Spectrum1D interval = solve_interval(p, kind, a, K + 8);
  Spectrum1D cell = solve_interval(p, anti ? Kind1D::Antiperiodic : Kind1D::Periodic, a,
                                   anti ? 2 * K : 2 * K + 1);
  require_tail(spectrum_info(interval), t_set, tolerance);
  require_tail(spectrum_info(cell), t_set, tolerance);

  IdentityReport rep;
  rep.name = std::string("reflection_1d_") + kind_name(kind);
  rep.samples = sample_desc(points, t_set);
  rep.left_side = "interval eigensolve on [0,a]";
  rep.right_side = anti ? "signed images of the antiperiodic kernel on [-a,a]"
                        : "signed images of the periodic kernel on [-a,a]";
  rep.tolerance = tolerance;
  for (const auto& xy : halton_points(points, 2, sample_start)) {
    double x = a * xy[0], y = a * xy[1];
    for (double t : t_set) {
      double lhs = kernel_1d(interval, t, x, y);
      double rhs = kernel_1d(cell, t, x, y) +
                   (plus ? 1.0 : -1.0) * kernel_1d(cell, t, -x, y);
      rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
    }
  }
  finish(rep);
  return rep;
}

IdentityReport torus_image_identity_2d(const TrigPotential& p, const BoxProblem& box,
                                       const std::vector<double>& t_set, int points, int K,
                                       double tolerance, int sample_start) {
  if (box.dim() != 2) throw std::invalid_argument("2D box required");
  // over-resolved box side; see reflection_identity_1d
  SpectrumND interval = solve_interval_nd(p, box, {K + 8, K + 8});
  std::vector<bool> anti = torus_extension_flags(box);
  std::vector<int> sizes(2);
  for (int i = 0; i < 2; ++i) sizes[i] = anti[i] ? 2 * K : 2 * K + 1;
  SpectrumND torus = solve_torus_nd(p, box, sizes, anti);
  require_tail(spectrum_info(interval), t_set, tolerance);
  require_tail(spectrum_info(torus), t_set, tolerance);

  double sgn[2];  // sign picked up by reflecting coordinate i
  for (int i = 0; i < 2; ++i) sgn[i] = box.bc[i][0] == Bc::Dirichlet ? -1.0 : 1.0;

  IdentityReport rep;
  rep.name = "torus_image_2d";
  rep.samples = sample_desc(points, t_set);
  rep.left_side = "box eigensolve, product trig basis";
  rep.right_side = "four signed reflections of the doubled-cell torus kernel";
  rep.tolerance = tolerance;
  for (const auto& s : halton_points(points, 4, sample_start)) {
    std::vector<double> x{box.sides[0] * s[0], box.sides[1] * s[1]};
    std::vector<double> y{box.sides[0] * s[2], box.sides[1] * s[3]};
    for (double t : t_set) {
      double lhs = kernel_nd(interval, t, x, y);
      double rhs = 0.0;
      for (int e1 : {1, -1})
        for (int e2 : {1, -1}) {
          double w = (e1 < 0 ? sgn[0] : 1.0) * (e2 < 0 ? sgn[1] : 1.0);
          rhs += w * kernel_nd(torus, t, {e1 * x[0], e2 * x[1]}, y);
        }
      rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
    }
  }
  finish(rep);
  return rep;
}

IdentityReport trace_pairing_identity(const TrigPotential& p, double a,
                                      const std::vector<double>& t_set, int K,
                                      double tolerance) {
  // interval sides over-resolved; see reflection_identity_1d
  Spectrum1D dd = solve_interval(p, Kind1D::DD, a, K + 8, false);
  Spectrum1D nn = solve_interval(p, Kind1D::NN, a, K + 9, false);
  Spectrum1D dn = solve_interval(p, Kind1D::DN, a, K + 8, false);
  Spectrum1D nd = solve_interval(p, Kind1D::ND, a, K + 8, false);
  Spectrum1D per = solve_interval(p, Kind1D::Periodic, a, 2 * K + 1, false);
  Spectrum1D apr = solve_interval(p, Kind1D::Antiperiodic, a, 2 * K, false);
  for (const auto* s : {&dd, &nn, &dn, &nd, &per, &apr})
    require_tail(spectrum_info(*s), t_set, tolerance);

  IdentityReport rep;
  rep.name = "trace_pairing_1d";
  rep.samples = sample_desc(0, t_set);
  rep.left_side = "four interval eigensolves on [0,a]";
  rep.right_side = "periodic and antiperiodic eigensolves on [-a,a]";
  rep.tolerance = tolerance;
  for (double t : t_set) {
    double r1 = heat_sum(dd.eigenvalues, t) + heat_sum(nn.eigenvalues, t) -
                heat_sum(per.eigenvalues, t);
    double r2 = heat_sum(dn.eigenvalues, t) + heat_sum(nd.eigenvalues, t) -
                heat_sum(apr.eigenvalues, t);
    rep.residual = std::max({rep.residual, std::abs(r1), std::abs(r2)});
  }
  finish(rep);
  return rep;
}

IdentityReport trace_quadrupling_2d(const TrigPotential& p, const BoxProblem& box,
                                    const std::vector<double>& t_set, int K,
                                    double tolerance) {
  if (box.dim() != 2) throw std::invalid_argument("2D box required");
  for (const auto& f : box.bc)
    if (f[0] != Bc::Dirichlet || f[1] != Bc::Dirichlet)
      throw std::invalid_argument("all-Dirichlet box required");
  // over-resolved box side; see reflection_identity_1d
  SpectrumND interval = solve_interval_nd(p, box, {K + 8, K + 8}, false);
  SpectrumND torus = solve_torus_nd(p, box, {2 * K + 1, 2 * K + 1}, {false, false});
  require_tail(spectrum_info(interval), t_set, tolerance);
  require_tail(spectrum_info(torus), t_set, tolerance);

  // uniform periodic tensor grid on the doubled cell, fine enough that no
  // product of retained basis frequencies aliases to a nonzero multiple of
  // the grid frequency: quadrature is then exact for the eigen-sum
  int M = 4 * K + 4;
  double a = box.sides[0], b = box.sides[1];
  double w = (2.0 * a / M) * (2.0 * b / M);

  double t_min = *std::min_element(t_set.begin(), t_set.end());
  int n_keep = 0;
  while (n_keep < torus.size() && torus.eigenvalues[n_keep] * t_min < 60.0) ++n_keep;
  n_keep = std::max(n_keep, 1);

  // mode values on the grid: Psi(n, g) with g = i*M + j
  int B = static_cast<int>(torus.vectors.rows());
  Eigen::MatrixXcd phi(B, M * M);
  Eigen::VectorXcd col(B);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      basis_values_torus(torus, {-a + 2.0 * a * i / M, -b + 2.0 * b * j / M}, col);
      phi.col(i * M + j) = col;
    }
  Eigen::MatrixXcd psi =
      torus.vectors.leftCols(n_keep).transpose().cast<std::complex<double>>() * phi;

  IdentityReport rep;
  rep.name = "trace_quadrupling_2d";
  rep.samples = sample_desc(0, t_set) + ", " + std::to_string(M) + "^2 grid";
  rep.left_side = "4x trace of the all-Dirichlet box eigensolve";
  rep.right_side = "signed diagonal integrals of the torus kernel, tensor-grid quadrature";
  rep.tolerance = tolerance;
  for (double t : t_set) {
    double rhs = heat_sum(torus.eigenvalues, t);  // identity reflection term
    for (int e = 1; e < 4; ++e) {                 // e bit 0: flip x1, bit 1: flip x2
      double term = 0.0;
      for (int n = 0; n < n_keep; ++n) {
        double acc = 0.0;
        for (int i = 0; i < M; ++i) {
          int ri = (e & 1) ? (M - i) % M : i;
          for (int j = 0; j < M; ++j) {
            int rj = (e & 2) ? (M - j) % M : j;
            acc += (psi(n, ri * M + rj) * std::conj(psi(n, i * M + j))).real();
          }
        }
        term += std::exp(-torus.eigenvalues[n] * t) * acc;
      }
      // all-Dirichlet: every single-coordinate reflection carries sign -1
      double sign = (e == 3) ? 1.0 : -1.0;
      rhs += sign * term * w;
    }
    double lhs = 4.0 * heat_sum(interval.eigenvalues, t);
    rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
  }
  finish(rep);
  return rep;
}

IdentityReport factorization_identity(const TrigPotential& p, const BoxProblem& box,
                                      const MultiIndex& k, const std::vector<double>& t_set,
                                      int points, int K, double tolerance, int sample_start) {
  if (box.dim() != 2 || static_cast<int>(k.size()) != 2)
    throw std::invalid_argument("2D box required");
  int axis = -1;
  for (int i = 0; i < 2; ++i)
    if (k[i] != 0) {
      if (axis >= 0) throw std::invalid_argument("k must be a coordinate direction");
      axis = i;
    }
  if (axis < 0) throw std::invalid_argument("k must be nonzero");
  int tr = 1 - axis;  // transverse coordinate

  TrigPotential qd = reduce_potential(p, k);
  SpectrumND torus = solve_torus_nd(qd, box, {2 * K + 1, 2 * K + 1}, {false, false});
  require_tail(spectrum_info(torus), t_set, tolerance);

  // 1D transverse potential: qd depends only on x_tr
  TrigPotential q1({box.sides[tr]});
  for (const auto& [m, c] : qd.coeffs()) q1.add_coeff({m[tr]}, c);
  Spectrum1D line = solve_interval(q1, Kind1D::Periodic, box.sides[tr], 2 * K + 1);
  require_tail(spectrum_info(line), t_set, tolerance);

  IdentityReport rep;
  rep.name = "factorization_2d";
  rep.samples = sample_desc(points, t_set);
  rep.left_side = "2D torus-periodic kernel of the reduced potential";
  rep.right_side = "periodized free Gaussian times 1D periodic transverse kernel";
  rep.tolerance = tolerance;
  for (const auto& s : halton_points(points, 4, sample_start)) {
    std::vector<double> x(2), y(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = box.sides[i] * (2.0 * s[i] - 1.0);
      y[i] = box.sides[i] * (2.0 * s[i + 2] - 1.0);
    }
    for (double t : t_set) {
      double lhs = kernel_nd(torus, t, x, y);
      double rhs = periodized_gaussian(x[axis] - y[axis], t, box.sides[axis]) *
                   kernel_1d(line, t, x[tr], y[tr]);
      rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
    }
  }
  finish(rep);
  return rep;
}

IdentityReport telescoped_dirichlet_trace(const TrigPotential& q2, double b,
                                          const std::vector<double>& t_set, int K,
                                          double tolerance) {
  Spectrum1D per = solve_interval(q2, Kind1D::Periodic, b, 2 * K + 1);
  Spectrum1D apr = solve_interval(q2, Kind1D::Antiperiodic, b, 2 * K);
  // over-resolved Dirichlet side; see reflection_identity_1d
  Spectrum1D dd = solve_interval(q2, Kind1D::DD, b, K + 8, false);
  require_tail(spectrum_info(per), t_set, tolerance);
  require_tail(spectrum_info(apr), t_set, tolerance);
  require_tail(spectrum_info(dd), t_set, tolerance);

  // the diagonal line integrands are smooth and 2b-periodic, so the uniform
  // grid is spectrally exact once it out-resolves the basis
  int M = std::max(256, 5 * K);
  double w = 2.0 * b / M;

  IdentityReport rep;
  rep.name = "telescoped_dirichlet_trace";
  rep.samples = sample_desc(0, t_set) + ", " + std::to_string(M) + "-point line quadrature";
  rep.left_side = "periodic trace minus two diagonal line integrals on [-b,b]";
  rep.right_side = "2x Dirichlet trace on [0,b]";
  rep.tolerance = tolerance;
  for (double t : t_set) {
    double i1 = 0.0, i2 = 0.0;
    for (int j = 0; j < M; ++j) {
      double x = -b + w * j;
      i1 += 0.5 * (kernel_1d(per, t, -x, x) + kernel_1d(apr, t, -x, x));
      i2 += 0.5 * (kernel_1d(per, t, b - x, b + x) + kernel_1d(apr, t, b - x, b + x));
    }
    double lhs = heat_sum(per.eigenvalues, t) - w * (i1 + i2);
    double rhs = 2.0 * heat_sum(dd.eigenvalues, t);
    rep.residual = std::max(rep.residual, std::abs(lhs - rhs));
  }
  finish(rep);
  return rep;
}

std::string suite_json(const std::vector<IdentityReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(json::parse(r.to_json()));
  json j;
  j["identities"] = arr;
  j["pass"] = suite_pass(reports);
  return j.dump(2);
}

bool suite_pass(const std::vector<IdentityReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return false;
  return true;
}

}  // namespace specbox
