#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specbox/potential.hpp"

using namespace specbox;
namespace {
constexpr double pi = std::numbers::pi;

CosineSpec make_spec(std::vector<double> sides, std::map<MultiIndex, double> terms) {
  CosineSpec s;
  s.sides = std::move(sides);
  s.terms = std::move(terms);
  return s;
}
}  // namespace

TEST_CASE("cosine to exponential expansion") {
  // n=1, {c_1=1}: Q(x) = cos(pi x), a_(1) = 1/2
  auto p = build_potential(make_spec({1.0}, {{{1}, 1.0}}));
  CHECK(p.coeff({1}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.coeff({-1}) == doctest::Approx(0.5).epsilon(1e-14));  // orbit fold

  // n=2, {c_(1,1)=1}: four exponentials, two stored orbits, each 1/4
  auto p2 = build_potential(make_spec({1.0, 1.0}, {{{1, 1}, 1.0}}));
  CHECK(p2.coeffs().size() == 2);
  CHECK(p2.coeff({1, 1}) == doctest::Approx(0.25));
  CHECK(p2.coeff({1, -1}) == doctest::Approx(0.25));

  // constant term passes through
  auto p3 = build_potential(make_spec({1.0, 1.0}, {{{0, 0}, 3.0}}));
  CHECK(p3.coeff({0, 0}) == doctest::Approx(3.0));
  CHECK(p3.coeffs().size() == 1);
}

TEST_CASE("evaluation, periodicity, evenness") {
  auto p = build_potential(make_spec({1.0}, {{{1}, 1.0}}));
  CHECK(p.evaluate({0.0}) == doctest::Approx(1.0));
  CHECK(p.evaluate({2.5}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.evaluate({2.5}) == doctest::Approx(p.evaluate({0.5})));

  auto p2 = build_potential(make_spec({1.0, 1.0}, {{{1, 1}, 1.0}}));
  CHECK(p2.evaluate({0.25, 0.25}) == doctest::Approx(0.5));

  // round trip against direct cosine sums at random points
  auto spec = make_spec({1.0, std::sqrt(2.0)},
                        {{{1, 1}, 1.0}, {{2, 0}, 0.3}, {{0, 3}, -0.7}, {{2, 2}, 0.11}});
  auto q = build_potential(spec);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x{u(rng) * spec.sides[0], u(rng) * spec.sides[1]};
    double direct = spec.evaluate(x);
    CHECK(q.evaluate(x) == doctest::Approx(direct).epsilon(1e-12));
    // coordinatewise flip and periodic shift
    CHECK(q.evaluate({-x[0], x[1]}) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(q.evaluate({x[0] + 2.0 * spec.sides[0], x[1]}) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("mean and subtract_mean") {
  auto p = build_potential(make_spec({1.0}, {{{0}, 3.0}, {{1}, 1.0}}));
  CHECK(p.mean_value() == doctest::Approx(3.0));
  CHECK(p.subtract_mean().mean_value() == doctest::Approx(0.0));
  auto p2 = build_potential(make_spec({1.0, 1.0}, {{{1, 1}, 1.0}}));
  CHECK(p2.mean_value() == doctest::Approx(0.0));
}

TEST_CASE("directional decomposition") {
  double a = 1.0, b = std::sqrt(2.0);
  auto q = build_potential(make_spec({a, b}, {{{1, 1}, 1.0}}));
  auto comps = directional_decomposition(q);
  REQUIRE(comps.size() == 2);
  // directions (1,1) and (1,-1), each Q_delta(s) = (1/2)cos(2 pi s)
  bool seen_pp = false, seen_pm = false;
  for (const auto& c : comps) {
    REQUIRE(c.series.size() == 2);
    CHECK(c.series[1] == doctest::Approx(0.5));
    if (c.direction == MultiIndex{1, 1}) {
      seen_pp = true;
      CHECK(c.dual_norm ==
            doctest::Approx(std::sqrt(1.0 / (4 * a * a) + 1.0 / (4 * b * b))));
    }
    if (c.direction == MultiIndex{1, -1}) seen_pm = true;
  }
  CHECK(seen_pp);
  CHECK(seen_pm);

  // coordinate direction
  auto qc = build_potential(make_spec({a, b}, {{{1, 0}, 1.0}}));
  auto cc = directional_decomposition(qc);
  REQUIRE(cc.size() == 1);
  CHECK(cc[0].direction == MultiIndex{1, 0});
  CHECK(cc[0].series[1] == doctest::Approx(1.0));

  // empty potential
  CHECK(directional_decomposition(TrigPotential({1.0})).empty());

  // nonzero mean rejected
  auto pm = build_potential(make_spec({1.0}, {{{0}, 1.0}}));
  CHECK_THROWS(directional_decomposition(pm));

  // reconstruction sum_delta Q_delta(delta . x) = Q(x)
  auto big = build_potential(
      make_spec({a, b}, {{{1, 1}, 1.0}, {{2, 1}, 0.4}, {{3, 0}, -0.2}, {{0, 2}, 0.15}}));
  auto parts = directional_decomposition(big);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x{u(rng) * a, u(rng) * b};
    double sum = 0.0;
    for (const auto& c : parts) {
      double s = c.direction[0] * x[0] / (2 * a) + c.direction[1] * x[1] / (2 * b);
      for (size_t k = 1; k < c.series.size(); ++k) sum += c.series[k] * std::cos(2 * pi * k * s);
    }
    CHECK(sum == doctest::Approx(big.evaluate(x)).epsilon(1e-12));
  }
}

TEST_CASE("reduced potentials") {
  double a = 1.0, b = std::sqrt(2.0);
  auto q = build_potential(make_spec({a, b}, {{{1, 1}, 1.0}}));
  auto r = reduce_potential(q, {1, 1});
  // (1/2) cos(pi(x1/a - x2/b))
  for (double x1 : {0.1, 0.4}) {
    for (double x2 : {0.2, 0.9}) {
      CHECK(r.evaluate({x1, x2}) ==
            doctest::Approx(0.5 * std::cos(pi * (x1 / a - x2 / b))).epsilon(1e-12));
    }
  }
  // separable zero-mean potential reduces to 0 for k with no zero components
  auto sep = build_potential(make_spec({a, b}, {{{1, 0}, 1.0}, {{0, 2}, 0.5}}));
  CHECK(reduce_potential(sep, {1, 1}).coeffs().empty());
  CHECK(reduce_potential(sep, {2, -3}).coeffs().empty());
  // k=(0,1) leaves cos(pi x1/a) unchanged
  auto qc = build_potential(make_spec({a, b}, {{{1, 0}, 1.0}}));
  auto rc = reduce_potential(qc, {0, 1});
  CHECK(rc.coeff({1, 0}) == doctest::Approx(0.25 * 2.0).epsilon(1e-12));
  CHECK(rc.coeffs() == qc.coeffs());
  // k=0 rejected
  CHECK_THROWS(reduce_potential(q, {0, 0}));

  // idempotence and constancy along d
  auto big = build_potential(make_spec({a, b}, {{{1, 1}, 1.0}, {{2, 2}, 0.3}, {{2, 0}, 0.2}}));
  MultiIndex k{1, 1};
  auto r1 = reduce_potential(big, k);
  auto r2 = reduce_potential(r1, k);
  CHECK(r1.coeffs() == r2.coeffs());
  std::vector<double> d{2 * k[0] * a, 2 * k[1] * b};
  std::vector<double> x{0.3, 0.7};
  double base = r1.evaluate(x);
  for (double s : {0.25, 0.5, 0.9})
    CHECK(r1.evaluate({x[0] + s * d[0], x[1] + s * d[1]}) == doctest::Approx(base).epsilon(1e-12));
  // central symmetry survives even when coordinatewise evenness fails
  CHECK(r1.evaluate({-x[0], -x[1]}) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("reflection x -> a - x") {
  auto p = build_potential(make_spec({1.0, 1.0}, {{{1, 0}, 1.0}}));
  auto rp = reflect_potential(p);
  CHECK(rp.cosine_spec().terms.at({1, 0}) == doctest::Approx(-1.0));
  auto p2 = build_potential(make_spec({1.0, 1.0}, {{{2, 0}, 1.0}}));
  CHECK(reflect_potential(p2).cosine_spec().terms.at({2, 0}) == doctest::Approx(1.0));
  auto p3 = build_potential(make_spec({1.0, 1.0}, {{{1, 1}, 1.0}}));
  CHECK(reflect_potential(p3).cosine_spec().terms.at({1, 1}) == doctest::Approx(1.0));
  // pointwise: reflected potential equals q(a1-x1, a2-x2)
  auto mixed = build_potential(
      make_spec({1.0, std::sqrt(2.0)}, {{{1, 1}, 1.0}, {{2, 1}, 0.4}, {{1, 0}, -0.3}}));
  auto rm = reflect_potential(mixed);
  for (double x1 : {0.12, 0.77}) {
    for (double x2 : {0.3, 1.1}) {
      CHECK(rm.evaluate({x1, x2}) ==
            doctest::Approx(mixed.evaluate({1.0 - x1, std::sqrt(2.0) - x2})).epsilon(1e-12));
    }
  }
}

TEST_CASE("cosine spec JSON round trip") {
  auto spec = make_spec({1.0, 2.0}, {{{1, 1}, 1.0}, {{2, 0}, 0.25}});
  auto text = spec.to_json();
  auto back = CosineSpec::from_json(text);
  CHECK(back.sides == spec.sides);
  CHECK(back.terms == spec.terms);
  CHECK(text.find("\"sides\"") != std::string::npos);
  CHECK(text.find("\"terms\"") != std::string::npos);
  CHECK(text.find("\"m\"") != std::string::npos);
  CHECK(text.find("\"c\"") != std::string::npos);
}

TEST_CASE("irrationality scan") {
  // sqrt(2) rounded to 12 significant digits: the square misses 2 by ~9e-12,
  // beyond the scan tolerance, so no rational relation should be reported
  BoxProblem box1 = BoxProblem::all_dirichlet({1.0, 1.41421356237});
  auto rep1 = irrationality_scan(box1, 100);
  CHECK(!rep1.relation_found);

  BoxProblem box2 = BoxProblem::all_dirichlet({1.0, 2.0});
  auto rep2 = irrationality_scan(box2, 4);
  REQUIRE(rep2.relation_found);
  long s = 0;
  // relation p satisfies p1*1 + p2*4 = 0
  s = rep2.relation[0] * 1 + rep2.relation[1] * 4;
  CHECK(s == 0);

  BoxProblem box3 = BoxProblem::all_dirichlet({1.0, 1.0});
  auto rep3 = irrationality_scan(box3, 1);
  CHECK(rep3.relation_found);
}

TEST_CASE("potential helpers") {
  auto p = build_potential(make_spec({1.0}, {{{0}, 2.0}, {{1}, 1.0}, {{3}, -0.5}}));
  CHECK(p.sup_bound() == doctest::Approx(2.0 + 1.0 + 0.5));
  CHECK(p.is_coordinatewise_even());
  auto lap = p.laplacian();
  // Delta cos(pi x) = -pi^2 cos(pi x)
  CHECK(lap.coeff({1}) == doctest::Approx(-pi * pi * 0.5));
  CHECK(lap.coeff({0}) == doctest::Approx(0.0));
  auto r = reduce_potential(build_potential(make_spec({1.0, 1.0}, {{{1, 1}, 1.0}})), {1, 1});
  CHECK(!r.is_coordinatewise_even());
}
