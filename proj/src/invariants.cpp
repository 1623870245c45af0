#include "specbox/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace specbox {

using json = nlohmann::json;
namespace {

std::string direction_label(const MultiIndex& d) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << "]";
  return os.str();
}

int nonzero_count(const MultiIndex& d) {
  int n = 0;
  for (int v : d) n += (v != 0);
  return n;
}

std::vector<double> head(const std::vector<double>& v, int j) {
  return {v.begin(), v.begin() + std::min<int>(j, v.size())};
}

// int_{R0} q^2 for a zero-mean even trig polynomial, by Parseval over the
// full exponential expansion (each stored orbit {m,-m} counts twice)
double cell_square_integral(const TrigPotential& q, const BoxProblem& box) {
  double s = 0.0;
  for (const auto& [m, c] : q.coeffs()) s += 2.0 * c * c;
  return s * box.cell_volume();
}

// lattice vectors d = (2 k_1 a_1, ..., 2 k_n a_n) with all k_i nonzero,
// up to overall sign (k_1 >= 1), grouped by |d|^2 with the smallest
// `max_radii` groups kept
std::map<double, double> q_d_groups(const TrigPotential& p0, const BoxProblem& box,
                                    int max_radii) {
  int n = box.dim();
  int bound = max_radii + 3;
  std::vector<std::pair<double, MultiIndex>> vectors;
  MultiIndex k(n, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      double r2 = 0.0;
      for (int j = 0; j < n; ++j) r2 += 4.0 * k[j] * k[j] * box.sides[j] * box.sides[j];
      vectors.emplace_back(r2, k);
      return;
    }
    int lo = (i == 0) ? 1 : -bound;
    for (int v = lo; v <= bound; ++v) {
      if (v == 0) continue;
      k[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(vectors.begin(), vectors.end());

  std::map<double, double> groups;
  double current = -1.0;
  for (const auto& [r2, kk] : vectors) {
    if (current < 0.0 || r2 - current > 1e-12 * r2) {
      if (static_cast<int>(groups.size()) == max_radii) break;
      current = r2;
      groups[current] = 0.0;
    }
    groups[current] += cell_square_integral(reduce_potential(p0, kk), box);
  }
  return groups;
}

Spectrum1D free_directional(const MultiIndex& dir, const BoxProblem& box, int K) {
  DirectionalComponent comp;
  comp.direction = dir;
  double n2 = 0.0;
  for (int i = 0; i < box.dim(); ++i) {
    double d = dir[i] / (2.0 * box.sides[i]);
    n2 += d * d;
  }
  comp.dual_norm = std::sqrt(n2);
  return directional_spectrum(comp, K);
}

double vec_dev(const std::vector<double>& a, const std::vector<double>& b) {
  double d = std::abs(static_cast<double>(a.size()) - static_cast<double>(b.size())) > 0
                 ? std::numeric_limits<double>::infinity()
                 : 0.0;
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}
}  // namespace

InvariantBundle bundle(const TrigPotential& p, const BoxProblem& box,
                       const BundleParams& params) {
  box.validate();
  if (p.dim() != box.dim()) throw std::invalid_argument("potential/box dimension mismatch");
  if (!p.is_coordinatewise_even())
    throw std::invalid_argument("coordinatewise even potential required");

  InvariantBundle b;
  b.box = box;
  b.params = params;
  b.mean_integral = p.mean_value() * box.volume();
  TrigPotential p0 = p.subtract_mean();

  for (const auto& comp : directional_decomposition(p0)) {
    DirectionalInvariant di;
    di.direction = comp.direction;
    int nz = nonzero_count(comp.direction);
    di.guaranteed = (nz == box.dim()) || (box.dim() >= 3 && nz > 1);
    Spectrum1D s = directional_spectrum(comp, params.K1d);
    di.eigenvalues = head(s.eigenvalues, std::min(params.J, s.trusted()));
    b.directional.push_back(std::move(di));
  }

  for (int i = 0; i < box.dim(); ++i) {
    auto v = coordinate_series(p0, i);
    CosineSpec cs;
    cs.sides = {box.sides[i]};
    for (int kk = 0; kk < static_cast<int>(v.size()); ++kk)
      if (v[kk] != 0.0) cs.terms[{kk}] = v[kk];
    TrigPotential qi = build_potential(cs);
    Spectrum1D s = solve_interval(qi, kind_from_bc(box.bc[i][0], box.bc[i][1]),
                                  box.sides[i], params.K1d, false);
    b.coordinate.push_back(head(s.eigenvalues, std::min(params.J, s.trusted())));
  }

  b.q_d_sums = q_d_groups(p0, box, params.max_radii);

  if (params.with_heat_fit && box.dim() == 2) {
    SpectrumND s = solve_interval_nd(p, box, {params.K_heat, params.K_heat}, false);
    SpectrumInfo info = spectrum_info(s);
    HeatTraceSeries series = trace_series(info, fit_t_grid(info));
    b.heat_coeffs = fit_expansion(series, {-1.0, -0.5, 0.0, 0.5, 1.0});
  }
  return b;
}

std::string InvariantBundle::to_json() const {
  json j;
  j["mean_integral"] = mean_integral;
  j["sides"] = box.sides;
  j["J"] = params.J;
  j["directional"] = json::array();
  for (const auto& d : directional) {
    json e;
    e["direction"] = d.direction;
    e["guaranteed"] = d.guaranteed;
    e["eigenvalues"] = d.eigenvalues;
    j["directional"].push_back(e);
  }
  j["coordinate"] = coordinate;
  j["q_d_sums"] = json::array();
  for (const auto& [r2, s] : q_d_sums) j["q_d_sums"].push_back({{"r2", r2}, {"sum", s}});
  if (!heat_coeffs.exponents.empty()) {
    json h;
    for (const auto& [e, c] : heat_coeffs.fitted) h[std::to_string(e)] = c;
    j["heat_coeffs"] = h;
  }
  return j.dump(2);
}

ComparisonReport compare_bundles(const InvariantBundle& a, const InvariantBundle& b,
                                 double spectrum_tol, double integral_tol, double heat_tol) {
  if (a.box.sides != b.box.sides || a.box.bc != b.box.bc || a.params.J != b.params.J)
    throw std::invalid_argument("bundles computed with different parameters");

  ComparisonReport rep;
  auto add = [&rep](std::string name, double dev, double tol) {
    rep.entries.push_back({std::move(name), dev, tol, dev <= tol});
  };

  add("mean_integral", std::abs(a.mean_integral - b.mean_integral), integral_tol);

  // union of directions; a missing profile is the zero profile, whose
  // spectrum is the free periodic one
  std::map<MultiIndex, const DirectionalInvariant*> da, db;
  for (const auto& d : a.directional) da[d.direction] = &d;
  for (const auto& d : b.directional) db[d.direction] = &d;
  std::vector<MultiIndex> dirs;
  for (const auto& [k, v] : da) dirs.push_back(k);
  for (const auto& [k, v] : db)
    if (!da.count(k)) dirs.push_back(k);
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    std::vector<double> ea, eb;
    int J = a.params.J;
    if (da.count(dir))
      ea = da[dir]->eigenvalues;
    else
      ea = head(free_directional(dir, a.box, a.params.K1d).eigenvalues, J);
    if (db.count(dir))
      eb = db[dir]->eigenvalues;
    else
      eb = head(free_directional(dir, b.box, b.params.K1d).eigenvalues, J);
    int common = static_cast<int>(std::min(ea.size(), eb.size()));
    ea = head(ea, common);
    eb = head(eb, common);
    add("directional" + direction_label(dir), vec_dev(ea, eb), spectrum_tol);
  }

  for (size_t i = 0; i < a.coordinate.size(); ++i)
    add("coordinate[" + std::to_string(i) + "]", vec_dev(a.coordinate[i], b.coordinate[i]),
        spectrum_tol);

  // q_d_sums keys may drift within the grouping tolerance; walk both maps
  auto ita = a.q_d_sums.begin();
  auto itb = b.q_d_sums.begin();
  while (ita != a.q_d_sums.end() || itb != b.q_d_sums.end()) {
    double r2;
    double va = 0.0, vb = 0.0;
    bool have_a = ita != a.q_d_sums.end(), have_b = itb != b.q_d_sums.end();
    if (have_a && have_b && std::abs(ita->first - itb->first) <= 1e-9 * ita->first) {
      r2 = ita->first;
      va = (ita++)->second;
      vb = (itb++)->second;
    } else if (have_a && (!have_b || ita->first < itb->first)) {
      r2 = ita->first;
      va = (ita++)->second;
    } else {
      r2 = itb->first;
      vb = (itb++)->second;
    }
    std::ostringstream os;
    os << "q_d_sums[r2=" << r2 << "]";
    add(os.str(), std::abs(va - vb), integral_tol);
  }

  if (!a.heat_coeffs.exponents.empty() && a.heat_coeffs.exponents == b.heat_coeffs.exponents)
    for (double e : a.heat_coeffs.exponents) {
      std::ostringstream os;
      os << "heat_coeff[t^" << e << "]";
      add(os.str(), std::abs(a.heat_coeffs.fitted.at(e) - b.heat_coeffs.fitted.at(e)),
          heat_tol);
    }

  rep.consistent = true;
  for (const auto& e : rep.entries)
    if (!e.match) {
      rep.consistent = false;
      rep.verdict = "separated by " + e.component;
      break;
    }
  if (rep.consistent) rep.verdict = "consistent with isospectrality";
  return rep;
}

std::string ComparisonReport::to_json() const {
  json j;
  j["entries"] = json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"component", e.component},
                            {"deviation", e.deviation},
                            {"tolerance", e.tolerance},
                            {"match", e.match}});
  j["consistent"] = consistent;
  j["verdict"] = verdict;
  return j.dump(2);
}

SeparabilityReport separability_diagnosis(const InvariantBundle& b, double tol) {
  SeparabilityReport rep;
  rep.tolerance = tol;
  rep.consistent = true;
  for (const auto& [r2, s] : b.q_d_sums) {
    if (s > rep.worst) rep.worst = s;
    if (s > tol && rep.consistent) {
      rep.consistent = false;
      rep.separating_radius2 = r2;
    }
  }
  return rep;
}

std::string SeparabilityReport::to_json() const {
  json j;
  j["consistent_with_separable"] = consistent;
  j["worst_sum"] = worst;
  j["tolerance"] = tolerance;
  if (!consistent) j["separating_radius2"] = separating_radius2;
  return j.dump(2);
}

}  // namespace specbox
