#include "specbox/eigennd.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>

namespace specbox {

namespace {
constexpr double pi = std::numbers::pi;

long flat_size(const std::vector<int>& K) {
  long b = 1;
  for (int k : K) b *= k;
  return b;
}

void check_cap(const std::vector<int>& K) {
  for (int k : K)
    if (k < 1) throw std::invalid_argument("basis sizes must be positive");
  if (flat_size(K) > kMatrixCap) throw std::invalid_argument("basis size cap exceeded");
}

// unflatten row-major (dim 0 slowest)
void unflatten(long J, const std::vector<int>& K, std::vector<int>& idx) {
  for (int i = static_cast<int>(K.size()) - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(J % K[i]);
    J /= K[i];
  }
}

Eigen::MatrixXd solve_dense(const Eigen::MatrixXd& m, bool keep_vectors,
                            std::vector<double>& eigenvalues) {
  double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, keep_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  if (!keep_vectors) return {};
  Eigen::MatrixXd V = es.eigenvectors();
  for (int n = 0; n < V.cols(); ++n) {
    for (int j = 0; j < V.rows(); ++j) {
      if (std::abs(V(j, n)) > 1e-12) {
        if (V(j, n) < 0.0) V.col(n) *= -1.0;
        break;
      }
    }
  }
  return V;
}
}  // namespace

std::vector<bool> torus_extension_flags(const BoxProblem& box) {
  std::vector<bool> anti(box.dim());
  for (int i = 0; i < box.dim(); ++i) anti[i] = box.bc[i][0] != box.bc[i][1];
  return anti;
}

Eigen::MatrixXd assemble_interval_nd(const TrigPotential& p, const BoxProblem& box,
                                     const std::vector<int>& K) {
  box.validate();
  check_cap(K);
  if (static_cast<int>(K.size()) != box.dim() || p.dim() != box.dim())
    throw std::invalid_argument("dimension mismatch");
  if (!p.is_coordinatewise_even())
    throw std::invalid_argument("interval mode requires a coordinatewise-even potential");
  const int n = box.dim();
  CosineSpec spec = p.cosine_spec();

  std::vector<Basis1D> bases(n);
  std::vector<int> mmax(n, 0);
  for (const auto& [m, c] : spec.terms)
    for (int i = 0; i < n; ++i) mmax[i] = std::max(mmax[i], m[i]);
  // per-dimension closed-form integral tensors T[i][m](j,k) = <phi_j, cos(m pi x/a) phi_k>
  std::vector<std::vector<Eigen::MatrixXd>> T(n);
  for (int i = 0; i < n; ++i) {
    bases[i] = Basis1D{kind_from_bc(box.bc[i][0], box.bc[i][1]), box.sides[i], K[i]};
    T[i].resize(mmax[i] + 1);
    for (int m = 0; m <= mmax[i]; ++m) {
      std::vector<double> unit(m + 1, 0.0);
      unit[m] = 1.0;
      Eigen::MatrixXd A = assemble_1d(unit, bases[i], 1.0);
      for (int j = 0; j < K[i]; ++j) A(j, j) -= bases[i].free_eigenvalue(j);
      T[i][m] = A;
    }
  }

  const long B = flat_size(K);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(B, B);
  std::vector<int> jj(n), kk(n);
  for (long J = 0; J < B; ++J) {
    unflatten(J, K, jj);
    for (int i = 0; i < n; ++i) H(J, J) += bases[i].free_eigenvalue(jj[i]);
    for (long Kf = J; Kf < B; ++Kf) {
      unflatten(Kf, K, kk);
      double entry = 0.0;
      for (const auto& [m, c] : spec.terms) {
        double prod = c;
        for (int i = 0; i < n && prod != 0.0; ++i) prod *= T[i][m[i]](jj[i], kk[i]);
        entry += prod;
      }
      H(J, Kf) += entry;
      if (Kf != J) H(Kf, J) += entry;
    }
  }
  return H;
}

Eigen::MatrixXd assemble_torus_nd(const TrigPotential& p, const BoxProblem& box,
                                  const std::vector<int>& K, const std::vector<bool>& anti) {
  box.validate();
  check_cap(K);
  const int n = box.dim();
  if (static_cast<int>(K.size()) != n || p.dim() != n ||
      static_cast<int>(anti.size()) != n)
    throw std::invalid_argument("dimension mismatch");
  // doubled frequencies per dimension
  std::vector<std::vector<int>> freqs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < K[i]; ++j) {
      int k = anti[i] ? (j / 2 * 2 + 1) * (j % 2 == 0 ? 1 : -1)
                      : (j == 0 ? 0 : ((j + 1) / 2 * 2) * (j % 2 == 1 ? 1 : -1));
      freqs[i].push_back(k);
    }
  }
  const long B = flat_size(K);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(B, B);
  std::vector<int> jj(n), kk(n);
  MultiIndex diff(n);
  for (long J = 0; J < B; ++J) {
    unflatten(J, K, jj);
    for (int i = 0; i < n; ++i) {
      double w = freqs[i][jj[i]] * pi / (2.0 * box.sides[i]);
      H(J, J) += w * w;
    }
    for (long Kf = J; Kf < B; ++Kf) {
      unflatten(Kf, K, kk);
      for (int i = 0; i < n; ++i) diff[i] = (freqs[i][jj[i]] - freqs[i][kk[i]]) / 2;
      double entry = p.coeff(diff);
      H(J, Kf) += entry;
      if (Kf != J) H(Kf, J) += entry;
    }
  }
  return H;
}

SpectrumND solve_interval_nd(const TrigPotential& p, const BoxProblem& box,
                             const std::vector<int>& K, bool keep_vectors) {
  SpectrumND s;
  s.box = box;
  s.mode = ModeND::IntervalFaces;
  s.sizes = K;
  for (int i = 0; i < box.dim(); ++i)
    s.bases.push_back(Basis1D{kind_from_bc(box.bc[i][0], box.bc[i][1]), box.sides[i], K[i]});
  Eigen::MatrixXd H = assemble_interval_nd(p, box, K);
  s.vectors = solve_dense(H, keep_vectors, s.eigenvalues);
  s.potential_sup = p.sup_bound();
  s.potential_hash = p.hash();
  return s;
}

SpectrumND solve_torus_nd(const TrigPotential& p, const BoxProblem& box,
                          const std::vector<int>& K, const std::vector<bool>& anti,
                          bool keep_vectors) {
  SpectrumND s;
  s.box = box;
  s.mode = ModeND::Torus;
  s.sizes = K;
  s.anti = anti;
  s.freqs.resize(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    for (int j = 0; j < K[i]; ++j) {
      int k = anti[i] ? (j / 2 * 2 + 1) * (j % 2 == 0 ? 1 : -1)
                      : (j == 0 ? 0 : ((j + 1) / 2 * 2) * (j % 2 == 1 ? 1 : -1));
      s.freqs[i].push_back(k);
    }
  }
  Eigen::MatrixXd H = assemble_torus_nd(p, box, K, anti);
  s.vectors = solve_dense(H, keep_vectors, s.eigenvalues);
  s.potential_sup = p.sup_bound();
  s.potential_hash = p.hash();
  return s;
}

std::vector<double> smallest_sums(const std::vector<std::vector<double>>& lists, int count) {
  const int n = static_cast<int>(lists.size());
  long avail = 1;
  for (const auto& l : lists) {
    if (l.empty()) throw std::invalid_argument("empty list in merge");
    avail *= static_cast<long>(l.size());
    if (avail > (1L << 40)) break;
  }
  if (count > avail) throw std::invalid_argument("count exceeds available products");
  using Node = std::pair<double, std::vector<int>>;
  auto cmp = [](const Node& a, const Node& b) { return a.first > b.first; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  std::set<std::vector<int>> seen;
  std::vector<int> zero(n, 0);
  double base = 0.0;
  for (const auto& l : lists) base += l[0];
  heap.push({base, zero});
  seen.insert(zero);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < count) {
    auto [v, idx] = heap.top();
    heap.pop();
    out.push_back(v);
    for (int i = 0; i < n; ++i) {
      if (idx[i] + 1 >= static_cast<int>(lists[i].size())) continue;
      std::vector<int> nxt = idx;
      nxt[i]++;
      if (seen.insert(nxt).second)
        heap.push({v - lists[i][idx[i]] + lists[i][nxt[i]], nxt});
    }
  }
  return out;
}

SpectrumND separable_spectrum(const std::vector<TrigPotential>& q_i, const BoxProblem& box,
                              int count, int K1d) {
  box.validate();
  const int n = box.dim();
  if (static_cast<int>(q_i.size()) != n) throw std::invalid_argument("need one 1D potential per dimension");
  SpectrumND s;
  s.box = box;
  s.mode = ModeND::IntervalFaces;
  std::vector<std::vector<double>> lists(n);
  for (int i = 0; i < n; ++i) {
    Kind1D kind = kind_from_bc(box.bc[i][0], box.bc[i][1]);
    Spectrum1D f = solve_interval(q_i[i], kind, box.sides[i], K1d, false);
    int trusted = f.trusted();
    lists[i].assign(f.eigenvalues.begin(), f.eigenvalues.begin() + trusted + 1);
    s.factors.push_back(std::move(f));
    s.potential_sup += q_i[i].sup_bound();
  }
  // keep one eigenvalue past the trusted range per dimension so the
  // completeness threshold below is computable
  s.eigenvalues = smallest_sums(lists, count);
  double threshold = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double v = lists[i].back();
    for (int j = 0; j < n; ++j)
      if (j != i) v += lists[j][0];
    threshold = std::min(threshold, v);
  }
  int trusted = 0;
  while (trusted < count && s.eigenvalues[trusted] < threshold) ++trusted;
  s.trusted_count = std::max(1, trusted);
  return s;
}

void basis_values_interval(const SpectrumND& spec, const std::vector<double>& x,
                           Eigen::VectorXd& out) {
  const int n = static_cast<int>(spec.sizes.size());
  std::vector<std::vector<double>> per_dim(n);
  for (int i = 0; i < n; ++i) {
    per_dim[i].resize(spec.sizes[i]);
    for (int j = 0; j < spec.sizes[i]; ++j) per_dim[i][j] = spec.bases[i].eval(j, x[i]);
  }
  const long B = flat_size(spec.sizes);
  out.resize(B);
  std::vector<int> idx(n);
  for (long J = 0; J < B; ++J) {
    unflatten(J, spec.sizes, idx);
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= per_dim[i][idx[i]];
    out(J) = v;
  }
}

void basis_values_torus(const SpectrumND& spec, const std::vector<double>& x,
                        Eigen::VectorXcd& out) {
  const int n = static_cast<int>(spec.sizes.size());
  std::vector<std::vector<std::complex<double>>> per_dim(n);
  for (int i = 0; i < n; ++i) {
    per_dim[i].resize(spec.sizes[i]);
    double norm = 1.0 / std::sqrt(2.0 * spec.box.sides[i]);
    for (int j = 0; j < spec.sizes[i]; ++j) {
      double theta = spec.freqs[i][j] * pi * x[i] / (2.0 * spec.box.sides[i]);
      per_dim[i][j] = norm * std::complex<double>(std::cos(theta), std::sin(theta));
    }
  }
  const long B = flat_size(spec.sizes);
  out.resize(B);
  std::vector<int> idx(n);
  for (long J = 0; J < B; ++J) {
    unflatten(J, spec.sizes, idx);
    std::complex<double> v = 1.0;
    for (int i = 0; i < n; ++i) v *= per_dim[i][idx[i]];
    out(J) = v;
  }
}

double kernel_nd(const SpectrumND& spec, double t, const std::vector<double>& x,
                 const std::vector<double>& y) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (spec.vectors.size() == 0) throw std::runtime_error("eigenvectors not kept");
  const int N = spec.size();
  if (spec.mode == ModeND::Torus) {
    Eigen::VectorXcd phx, phy;
    basis_values_torus(spec, x, phx);
    basis_values_torus(spec, y, phy);
    Eigen::VectorXcd px = spec.vectors.transpose() * phx;
    Eigen::VectorXcd py = spec.vectors.transpose() * phy;
    std::complex<double> sum = 0.0;
    for (int n = N - 1; n >= 0; --n)
      sum += std::exp(-spec.eigenvalues[n] * t) * px(n) * std::conj(py(n));
    return sum.real();
  }
  Eigen::VectorXd phx, phy;
  basis_values_interval(spec, x, phx);
  basis_values_interval(spec, y, phy);
  Eigen::VectorXd px = spec.vectors.transpose() * phx;
  Eigen::VectorXd py = spec.vectors.transpose() * phy;
  double sum = 0.0;
  for (int n = N - 1; n >= 0; --n) sum += std::exp(-spec.eigenvalues[n] * t) * px(n) * py(n);
  return sum;
}

}  // namespace specbox
