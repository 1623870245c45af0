#include "specbox/eigen1d.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace specbox {

namespace {
constexpr double pi = std::numbers::pi;

// sin(q*pi/2), cos(q*pi/2) for integer q, exactly
int sin_half(int q) {
  switch (((q % 4) + 4) % 4) {
    case 1: return 1;
    case 3: return -1;
    default: return 0;
  }
}
int cos_half(int q) {
  switch (((q % 4) + 4) % 4) {
    case 0: return 1;
    case 2: return -1;
    default: return 0;
  }
}

// Trig polynomial in theta = pi*x/(2a): q -> (cos coeff, sin coeff), q >= 0.
using TrigSum = std::map<int, std::pair<double, double>>;

void add_term(TrigSum& s, int q, double ccos, double csin) {
  if (q < 0) {
    q = -q;
    csin = -csin;
  }
  auto& [c, d] = s[q];
  c += ccos;
  if (q != 0) d += csin;
}

// product of two atoms (without norms)
TrigSum atom_product(const Basis1D::Atom& a, const Basis1D::Atom& b) {
  TrigSum s;
  if (!a.is_sin && !b.is_sin) {  // cos cos
    add_term(s, a.q - b.q, 0.5, 0.0);
    add_term(s, a.q + b.q, 0.5, 0.0);
  } else if (a.is_sin && b.is_sin) {  // sin sin
    add_term(s, a.q - b.q, 0.5, 0.0);
    add_term(s, a.q + b.q, -0.5, 0.0);
  } else {  // sin cos (in either order)
    int qs = a.is_sin ? a.q : b.q;
    int qc = a.is_sin ? b.q : a.q;
    add_term(s, qs + qc, 0.0, 0.5);
    add_term(s, qs - qc, 0.0, 0.5);
  }
  return s;
}

// multiply a TrigSum by cos(p*theta)
TrigSum times_cos(const TrigSum& s, int p) {
  TrigSum out;
  for (const auto& [q, cd] : s) {
    add_term(out, q - p, 0.5 * cd.first, -0.5 * cd.second);
    add_term(out, q + p, 0.5 * cd.first, 0.5 * cd.second);
    // cos q cos p = (cos(q-p)+cos(q+p))/2 ; sin q cos p = (sin(q+p)+sin(q-p))/2
  }
  return out;
}

// integral of the sum over the basis cell
double integrate(const TrigSum& s, const Basis1D& basis) {
  const double a = basis.length;
  const bool doubled = kind_on_doubled_cell(basis.kind);
  double total = 0.0;
  for (const auto& [q, cd] : s) {
    if (doubled) {
      // over [-a,a]: sin terms vanish; cos: q==0 -> 2a else (4a/(q pi)) sin(q pi/2)
      if (q == 0)
        total += cd.first * 2.0 * a;
      else
        total += cd.first * (4.0 * a / (q * pi)) * sin_half(q);
    } else {
      if (q == 0) {
        total += cd.first * a;
      } else {
        total += cd.first * (2.0 * a / (q * pi)) * sin_half(q);
        total += cd.second * (2.0 * a / (q * pi)) * (1 - cos_half(q));
      }
    }
  }
  return total;
}
}  // namespace

const char* kind_name(Kind1D k) {
  switch (k) {
    case Kind1D::DD: return "DD";
    case Kind1D::DN: return "DN";
    case Kind1D::ND: return "ND";
    case Kind1D::NN: return "NN";
    case Kind1D::Periodic: return "Periodic";
    case Kind1D::Antiperiodic: return "Antiperiodic";
  }
  return "?";
}

Kind1D kind_from_bc(Bc left, Bc right) {
  if (left == Bc::Dirichlet) return right == Bc::Dirichlet ? Kind1D::DD : Kind1D::DN;
  return right == Bc::Dirichlet ? Kind1D::ND : Kind1D::NN;
}

bool kind_on_doubled_cell(Kind1D k) {
  return k == Kind1D::Periodic || k == Kind1D::Antiperiodic;
}

Basis1D::Atom Basis1D::atom(int j) const {
  const double a = length;
  switch (kind) {
    case Kind1D::DD:
      return {true, 2 * (j + 1), std::sqrt(2.0 / a)};
    case Kind1D::NN:
      return {false, 2 * j, j == 0 ? std::sqrt(1.0 / a) : std::sqrt(2.0 / a)};
    case Kind1D::DN:
      return {true, 2 * j + 1, std::sqrt(2.0 / a)};
    case Kind1D::ND:
      return {false, 2 * j + 1, std::sqrt(2.0 / a)};
    case Kind1D::Periodic: {
      if (j == 0) return {false, 0, 1.0 / std::sqrt(2.0 * a)};
      int k = (j + 1) / 2;
      bool is_sin = (j % 2 == 0);
      return {is_sin, 2 * k, 1.0 / std::sqrt(a)};
    }
    case Kind1D::Antiperiodic: {
      int k = j / 2;
      bool is_sin = (j % 2 == 1);
      return {is_sin, 2 * k + 1, 1.0 / std::sqrt(a)};
    }
  }
  throw std::logic_error("bad kind");
}

double Basis1D::eval(int j, double x) const {
  Atom at = atom(j);
  double theta = at.q * pi * x / (2.0 * length);
  return at.norm * (at.is_sin ? std::sin(theta) : std::cos(theta));
}

double Basis1D::free_eigenvalue(int j) const {
  Atom at = atom(j);
  double w = at.q * pi / (2.0 * length);
  return w * w;
}

void Basis1D::validate() const {
  if (size < 4) throw std::invalid_argument("basis size must be >= 4");
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("basis length must be positive");
}

double Spectrum1D::eigenfunction(int n, double x) const {
  if (vectors.size() == 0) throw std::runtime_error("eigenvectors not kept");
  double v = 0.0;
  for (int j = 0; j < size(); ++j) v += vectors(j, n) * basis.eval(j, x);
  return v;
}

std::vector<double> cosine_coeffs_1d(const TrigPotential& p) {
  if (p.dim() != 1) throw std::invalid_argument("1D potential required");
  int mmax = 0;
  for (const auto& [m, c] : p.coeffs()) mmax = std::max(mmax, std::abs(m[0]));
  std::vector<double> v(mmax + 1, 0.0);
  for (const auto& [m, c] : p.coeffs()) v[std::abs(m[0])] += (m[0] == 0 ? c : 2.0 * c);
  return v;
}

Eigen::MatrixXd assemble_1d(const std::vector<double>& cosine, const Basis1D& basis,
                            double stiffness_scale) {
  basis.validate();
  if (!(stiffness_scale > 0.0)) throw std::invalid_argument("stiffness scale must be positive");
  const int K = basis.size;
  const int mmax = static_cast<int>(cosine.size()) - 1;
  // cos(m pi x / a) has doubled frequency 2m; coupling reaches q +/- 2m.
  if (mmax > 0 && 2 * mmax >= basis.atom(K - 1).q)
    std::cerr << "[specbox] warning: basis size " << K
              << " is small for potential harmonic " << mmax << "\n";
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(K, K);
  for (int j = 0; j < K; ++j) {
    M(j, j) += stiffness_scale * basis.free_eigenvalue(j);
    for (int k = j; k < K; ++k) {
      TrigSum prod = atom_product(basis.atom(j), basis.atom(k));
      double entry = 0.0;
      for (int m = 0; m <= mmax; ++m) {
        if (cosine[m] == 0.0) continue;
        entry += cosine[m] * integrate(m == 0 ? prod : times_cos(prod, 2 * m), basis);
      }
      entry *= basis.atom(j).norm * basis.atom(k).norm;
      M(j, k) += entry;
      if (k != j) M(k, j) += entry;
    }
  }
  return M;
}

Eigen::MatrixXd assemble_1d(const TrigPotential& p, const Basis1D& basis,
                            double stiffness_scale) {
  if (p.dim() != 1) throw std::invalid_argument("1D potential required");
  if (std::abs(p.sides()[0] - basis.length) > 1e-12 * basis.length)
    throw std::invalid_argument("potential period incompatible with basis cell");
  return assemble_1d(cosine_coeffs_1d(p), basis, stiffness_scale);
}

Eigen::MatrixXd assemble_1d_quadrature(const std::vector<double>& cosine,
                                       const Basis1D& basis, double stiffness_scale,
                                       int nodes) {
  basis.validate();
  const int K = basis.size;
  const double lo = basis.cell_lo(), hi = basis.cell_hi();
  // Gauss-Legendre nodes on [-1,1] via Newton on Legendre polynomials
  std::vector<double> xg(nodes), wg(nodes);
  for (int i = 0; i < nodes; ++i) {
    double x = std::cos(pi * (i + 0.75) / (nodes + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= nodes; ++l) {
        double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      double dp = nodes * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= nodes; ++l) {
      double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    double dp = nodes * (x * p1 - p0) / (x * x - 1.0);
    xg[i] = x;
    wg[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  auto V = [&](double x) {
    double v = 0.0;
    for (size_t m = 0; m < cosine.size(); ++m) v += cosine[m] * std::cos(m * pi * x / basis.length);
    return v;
  };
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(K, K);
  for (int j = 0; j < K; ++j) {
    M(j, j) += stiffness_scale * basis.free_eigenvalue(j);
    for (int k = j; k < K; ++k) {
      double entry = 0.0;
      for (int i = 0; i < nodes; ++i) {
        double x = 0.5 * (hi - lo) * xg[i] + 0.5 * (hi + lo);
        entry += 0.5 * (hi - lo) * wg[i] * basis.eval(j, x) * basis.eval(k, x) * V(x);
      }
      M(j, k) += entry;
      if (k != j) M(k, j) += entry;
    }
  }
  return M;
}

Spectrum1D solve_1d(const Eigen::MatrixXd& m, const Basis1D& basis, double stiffness,
                    bool keep_vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, keep_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Spectrum1D out;
  out.basis = basis;
  out.stiffness = stiffness;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  if (keep_vectors) {
    out.vectors = es.eigenvectors();
    // sign convention: first component above threshold positive
    for (int n = 0; n < out.vectors.cols(); ++n) {
      for (int j = 0; j < out.vectors.rows(); ++j) {
        double v = out.vectors(j, n);
        if (std::abs(v) > 1e-12) {
          if (v < 0.0) out.vectors.col(n) *= -1.0;
          break;
        }
      }
    }
  }
  return out;
}

Spectrum1D solve_interval(const TrigPotential& p, Kind1D kind, double a, int K,
                          bool keep_vectors) {
  Basis1D basis{kind, a, K};
  auto cosine = cosine_coeffs_1d(p);
  Spectrum1D s = solve_1d(assemble_1d(cosine, basis), basis, 1.0, keep_vectors);
  s.potential_sup = p.sup_bound();
  s.potential_hash = p.hash();
  return s;
}

Spectrum1D directional_spectrum(const DirectionalComponent& comp, int K) {
  Basis1D basis{Kind1D::Periodic, 0.5, K};
  std::vector<double> cosine(comp.series.size(), 0.0);
  for (size_t k = 1; k < comp.series.size(); ++k) cosine[k] = comp.series[k];
  double c = comp.dual_norm * comp.dual_norm;
  Spectrum1D s = solve_1d(assemble_1d(cosine, basis, c), basis, c, true);
  for (double b : cosine) s.potential_sup += std::abs(b);
  return s;
}

double kernel_1d(const Spectrum1D& spec, double t, double x, double y) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (spec.vectors.size() == 0) throw std::runtime_error("eigenvectors not kept");
  const int K = spec.size();
  Eigen::VectorXd phx(K), phy(K);
  for (int j = 0; j < K; ++j) {
    phx(j) = spec.basis.eval(j, x);
    phy(j) = spec.basis.eval(j, y);
  }
  Eigen::VectorXd px = spec.vectors.transpose() * phx;
  Eigen::VectorXd py = spec.vectors.transpose() * phy;
  double sum = 0.0;
  for (int n = K - 1; n >= 0; --n) sum += std::exp(-spec.eigenvalues[n] * t) * px(n) * py(n);
  return sum;
}

std::string spectrum_csv(const std::vector<double>& eigenvalues) {
  std::ostringstream os;
  os.precision(16);
  os << "index,eigenvalue\n";
  for (size_t i = 0; i < eigenvalues.size(); ++i) os << i << "," << eigenvalues[i] << "\n";
  return os.str();
}

}  // namespace specbox
