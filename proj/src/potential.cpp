#include "specbox/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

namespace specbox {

using std::numbers::pi;
using json = nlohmann::json;

char bc_char(Bc b) { return b == Bc::Dirichlet ? 'D' : 'N'; }

Bc bc_from_char(char c) {
  if (c == 'D' || c == 'd') return Bc::Dirichlet;
  if (c == 'N' || c == 'n') return Bc::Neumann;
  throw std::invalid_argument("boundary condition must be 'D' or 'N'");
}

double BoxProblem::volume() const {
  double v = 1.0;
  for (double a : sides) v *= a;
  return v;
}

double BoxProblem::cell_volume() const {
  return volume() * std::pow(2.0, dim());
}

void BoxProblem::validate() const {
  if (dim() < 1 || dim() > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (bc.size() != sides.size()) throw std::invalid_argument("bc count must match dimension");
  for (double a : sides)
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("sides must be positive and finite");
}

BoxProblem BoxProblem::all_dirichlet(std::vector<double> sides) {
  BoxProblem box;
  box.bc.assign(sides.size(), {Bc::Dirichlet, Bc::Dirichlet});
  box.sides = std::move(sides);
  box.validate();
  return box;
}

void CosineSpec::validate() const {
  if (dim() < 1) throw std::invalid_argument("CosineSpec needs at least one side");
  for (double a : sides)
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("sides must be positive and finite");
  for (const auto& [m, c] : terms) {
    if (static_cast<int>(m.size()) != dim()) throw std::invalid_argument("index arity mismatch");
    for (int mi : m)
      if (mi < 0) throw std::invalid_argument("cosine indices must be componentwise nonnegative");
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
  }
}

double CosineSpec::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("point dimension mismatch");
  double total = 0.0;
  for (const auto& [m, c] : terms) {
    double term = c;
    for (int i = 0; i < dim(); ++i) term *= std::cos(pi * m[i] * x[i] / sides[i]);
    total += term;
  }
  return total;
}

std::string CosineSpec::to_json() const {
  json j;
  j["sides"] = sides;
  j["terms"] = json::array();
  for (const auto& [m, c] : terms) j["terms"].push_back({{"m", m}, {"c", c}});
  return j.dump();
}

CosineSpec CosineSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  CosineSpec spec;
  spec.sides = j.at("sides").get<std::vector<double>>();
  for (const auto& term : j.at("terms")) {
    MultiIndex m = term.at("m").get<MultiIndex>();
    double c = term.at("c").get<double>();
    spec.terms[m] += c;
  }
  spec.validate();
  return spec;
}

MultiIndex TrigPotential::canonical(MultiIndex m, int* sign_flipped) {
  if (sign_flipped) *sign_flipped = 0;
  for (int v : m) {
    if (v > 0) return m;
    if (v < 0) {
      for (int& w : m) w = -w;
      if (sign_flipped) *sign_flipped = 1;
      return m;
    }
  }
  return m;  // zero index
}

TrigPotential::TrigPotential(std::vector<double> sides) : sides_(std::move(sides)) {}

TrigPotential::TrigPotential(std::vector<double> sides, std::map<MultiIndex, double> coeffs)
    : sides_(std::move(sides)) {
  for (auto& [m, c] : coeffs) add_coeff(m, c);
  prune();
}

double TrigPotential::coeff(const MultiIndex& m) const {
  auto it = coeffs_.find(canonical(m));
  return it == coeffs_.end() ? 0.0 : it->second;
}

void TrigPotential::add_coeff(const MultiIndex& m, double value) {
  if (static_cast<int>(m.size()) != dim()) throw std::invalid_argument("index arity mismatch");
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite coefficient");
  coeffs_[canonical(m)] += value;
}

void TrigPotential::prune() {
  double peak = 0.0;
  for (const auto& [m, c] : coeffs_) peak = std::max(peak, std::abs(c));
  const double drop = 1e-15 * peak;
  for (auto it = coeffs_.begin(); it != coeffs_.end();)
    it = std::abs(it->second) <= drop ? coeffs_.erase(it) : std::next(it);
}

double TrigPotential::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("point dimension mismatch");
  double total = 0.0;
  for (const auto& [m, c] : coeffs_) {
    double phase = 0.0;
    bool zero = true;
    for (int i = 0; i < dim(); ++i) {
      phase += pi * m[i] * x[i] / sides_[i];
      zero = zero && m[i] == 0;
    }
    total += zero ? c : 2.0 * c * std::cos(phase);
  }
  return total;
}

double TrigPotential::mean_value() const {
  return coeff(MultiIndex(dim(), 0));
}

TrigPotential TrigPotential::subtract_mean() const {
  TrigPotential out = *this;
  out.coeffs_.erase(MultiIndex(dim(), 0));
  return out;
}

bool TrigPotential::is_coordinatewise_even(double tol) const {
  double peak = 0.0;
  for (const auto& [m, c] : coeffs_) peak = std::max(peak, std::abs(c));
  for (const auto& [m, c] : coeffs_) {
    for (int i = 0; i < dim(); ++i) {
      if (m[i] == 0) continue;
      MultiIndex flipped = m;
      flipped[i] = -flipped[i];
      if (std::abs(coeff(flipped) - c) > tol * std::max(1.0, peak)) return false;
    }
  }
  return true;
}

double TrigPotential::sup_bound() const {
  double total = 0.0;
  for (const auto& [m, c] : coeffs_) {
    bool zero = std::all_of(m.begin(), m.end(), [](int v) { return v == 0; });
    total += (zero ? 1.0 : 2.0) * std::abs(c);
  }
  return total;
}

TrigPotential TrigPotential::laplacian() const {
  TrigPotential out(sides_);
  for (const auto& [m, c] : coeffs_) {
    double freq2 = 0.0;
    for (int i = 0; i < dim(); ++i) freq2 += std::pow(pi * m[i] / sides_[i], 2);
    if (freq2 != 0.0) out.add_coeff(m, -freq2 * c);
  }
  return out;
}

TrigPotential TrigPotential::scaled(double s) const {
  TrigPotential out(sides_);
  for (const auto& [m, c] : coeffs_) out.add_coeff(m, s * c);
  out.prune();
  return out;
}

TrigPotential TrigPotential::operator+(const TrigPotential& other) const {
  if (sides_ != other.sides_) throw std::invalid_argument("potential sides mismatch");
  TrigPotential out = *this;
  for (const auto& [m, c] : other.coeffs_) out.add_coeff(m, c);
  out.prune();
  return out;
}

CosineSpec TrigPotential::cosine_spec() const {
  if (!is_coordinatewise_even()) throw std::invalid_argument("potential is not coordinatewise even");
  CosineSpec spec;
  spec.sides = sides_;
  for (const auto& [m, c] : coeffs_) {
    MultiIndex abs_m = m;
    int nonzero = 0;
    for (int& v : abs_m) {
      v = std::abs(v);
      if (v != 0) ++nonzero;
    }
    // Each orbit in the coordinatewise sign class of abs_m carries the same
    // value c; the cosine coefficient collects all 2^nonzero exponentials.
    spec.terms[abs_m] += c * 2.0;  // orbit {m,-m} gives two exponentials
    if (nonzero == 0) spec.terms[abs_m] += -c;  // constant has no mirror
  }
  // The loop above added 2c per stored orbit; among the 2^p sign patterns of a
  // p-nonzero index there are 2^(p-1) orbits, so the total is c * 2^p as
  // required by c_m = a_m * 2^p. Orbits with mixed signs fold onto the same
  // abs index.
  return spec;
}

uint64_t TrigPotential::hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (double a : sides_) {
    uint64_t bits;
    std::memcpy(&bits, &a, sizeof bits);
    mix(bits);
  }
  for (const auto& [m, c] : coeffs_) {
    for (int v : m) mix(static_cast<uint64_t>(static_cast<int64_t>(v)));
    uint64_t bits;
    std::memcpy(&bits, &c, sizeof bits);
    mix(bits);
  }
  return h;
}

TrigPotential build_potential(const CosineSpec& spec) {
  spec.validate();
  TrigPotential out(spec.sides);
  const int n = spec.dim();
  for (const auto& [m, c] : spec.terms) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
      if (m[i] != 0) support.push_back(i);
    const int p = static_cast<int>(support.size());
    const double amp = c / std::pow(2.0, p);
    // prod cos = 2^-p sum over sign patterns of the exponentials. add_coeff
    // folds each pattern onto its orbit representative, and for p > 0 every
    // orbit shows up twice (once per global sign), hence the extra 1/2.
    for (int mask = 0; mask < (1 << p); ++mask) {
      MultiIndex e = m;
      for (int b = 0; b < p; ++b)
        if (mask & (1 << b)) e[support[b]] = -e[support[b]];
      out.add_coeff(e, p == 0 ? amp : amp / 2.0);
    }
  }
  out.prune();
  return out;
}

TrigPotential reflect_potential(const TrigPotential& p) {
  CosineSpec spec = p.cosine_spec();  // throws for non-coordinatewise-even input
  CosineSpec flipped;
  flipped.sides = spec.sides;
  for (const auto& [m, c] : spec.terms) {
    int total = std::accumulate(m.begin(), m.end(), 0);
    flipped.terms[m] = (total % 2 == 0) ? c : -c;
  }
  return build_potential(flipped);
}

TrigPotential reduce_potential(const TrigPotential& p, const MultiIndex& k) {
  if (static_cast<int>(k.size()) != p.dim()) throw std::invalid_argument("lattice vector arity mismatch");
  if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }))
    throw std::invalid_argument("lattice vector k must be nonzero");
  TrigPotential out(p.sides());
  for (const auto& [m, c] : p.coeffs()) {
    long dot = 0;
    for (size_t i = 0; i < m.size(); ++i) dot += static_cast<long>(m[i]) * k[i];
    if (dot == 0) out.add_coeff(m, c);
  }
  return out;
}

std::vector<DirectionalComponent> directional_decomposition(const TrigPotential& p) {
  if (std::abs(p.mean_value()) > 1e-14 * std::max(1.0, p.sup_bound()))
    throw std::invalid_argument("subtract mean first");
  std::map<MultiIndex, std::vector<double>> components;
  for (const auto& [m, c] : p.coeffs()) {
    if (std::all_of(m.begin(), m.end(), [](int v) { return v == 0; })) continue;
    int g = 0;
    for (int v : m) g = std::gcd(g, std::abs(v));
    MultiIndex primitive(m.size());
    for (size_t i = 0; i < m.size(); ++i) primitive[i] = m[i] / g;
    auto& series = components[primitive];
    if (static_cast<int>(series.size()) <= g) series.resize(g + 1, 0.0);
    series[g] += 2.0 * c;
  }
  std::vector<DirectionalComponent> out;
  for (auto& [dir, series] : components) {
    double norm2 = 0.0;
    for (size_t i = 0; i < dir.size(); ++i) norm2 += std::pow(dir[i] / (2.0 * p.sides()[i]), 2);
    out.push_back({dir, std::move(series), std::sqrt(norm2)});
  }
  return out;
}

std::vector<double> coordinate_series(const TrigPotential& p, int dim_index) {
  if (dim_index < 0 || dim_index >= p.dim()) throw std::invalid_argument("bad dimension index");
  if (!p.is_coordinatewise_even()) throw std::invalid_argument("potential is not coordinatewise even");
  std::vector<double> v;
  auto ensure = [&v](int k) {
    if (static_cast<int>(v.size()) <= k) v.resize(k + 1, 0.0);
  };
  for (const auto& [m, c] : p.coeffs()) {
    bool axis_only = true;
    for (size_t i = 0; i < m.size(); ++i)
      if (static_cast<int>(i) != dim_index && m[i] != 0) axis_only = false;
    if (!axis_only) continue;
    int k = std::abs(m[dim_index]);
    ensure(k);
    v[k] += (k == 0) ? c : 2.0 * c;
  }
  return v;
}

std::string IrrationalityReport::to_json() const {
  json j;
  j["relation_found"] = relation_found;
  j["relation"] = relation;
  j["bound"] = bound;
  return j.dump();
}

IrrationalityReport irrationality_scan(const BoxProblem& box, int bound) {
  if (bound < 1) throw std::invalid_argument("bound must be >= 1");
  box.validate();
  const int n = box.dim();
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) sq[i] = box.sides[i] * box.sides[i];
  IrrationalityReport report;
  report.bound = bound;

  auto check = [&](const std::vector<int>& p) {
    double sum = 0.0, peak = 0.0;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      sum += p[i] * sq[i];
      peak = std::max(peak, std::abs(p[i] * sq[i]));
      nonzero = nonzero || p[i] != 0;
    }
    if (nonzero && std::abs(sum) <= 1e-12 * peak) {
      report.relation_found = true;
      report.relation = p;
      return true;
    }
    return false;
  };

  if (n == 1) return report;  // a^2 alone admits no rational relation
  // Solve for the last component instead of scanning it.
  std::vector<int> p(n, 0);
  std::vector<int> limits(n - 1, bound);
  std::vector<int> cursor(n - 1, -bound);
  while (true) {
    for (int i = 0; i < n - 1; ++i) p[i] = cursor[i];
    double partial = 0.0;
    for (int i = 0; i < n - 1; ++i) partial += p[i] * sq[i];
    double last = -partial / sq[n - 1];
    int rounded = static_cast<int>(std::llround(last));
    if (std::abs(rounded) <= bound) {
      p[n - 1] = rounded;
      if (check(p)) return report;
    }
    int i = 0;
    while (i < n - 1 && ++cursor[i] > limits[i]) cursor[i++] = -bound;
    if (i == n - 1) break;
  }
  return report;
}

}  // namespace specbox
