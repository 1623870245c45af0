#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specbox/eigennd.hpp"

using namespace specbox;
namespace {
constexpr double pi = std::numbers::pi;

TrigPotential cospot(std::vector<double> sides, std::map<MultiIndex, double> terms) {
  CosineSpec s;
  s.sides = std::move(sides);
  s.terms = std::move(terms);
  return build_potential(s);
}
}  // namespace

TEST_CASE("free 2D interval spectrum") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto s = solve_interval_nd(TrigPotential({1.0, 1.0}), box, {8, 8}, false);
  std::vector<double> expect;
  for (int j = 1; j <= 8; ++j)
    for (int k = 1; k <= 8; ++k) expect.push_back(pi * pi * (j * j + k * k));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 20; ++i)
    CHECK(s.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  CHECK(s.eigenvalues[0] == doctest::Approx(2 * pi * pi));
}

TEST_CASE("free 2D torus spectrum") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto s = solve_torus_nd(TrigPotential({1.0, 1.0}), box, {9, 9}, {false, false}, false);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 1; i <= 4; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(pi * pi));
  CHECK(s.eigenvalues[5] == doctest::Approx(2 * pi * pi));
}

TEST_CASE("constant shift in 2D") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto s0 = solve_interval_nd(TrigPotential({1.0, 1.0}), box, {6, 6}, false);
  auto sg = solve_interval_nd(cospot({1.0, 1.0}, {{{0, 0}, 0.8}}), box, {6, 6}, false);
  for (int i = 0; i < 36; ++i)
    CHECK(sg.eigenvalues[i] == doctest::Approx(s0.eigenvalues[i] + 0.8).epsilon(1e-12));
}

TEST_CASE("potential matrix element q=cos(pi x1)cos(pi x2) at phi_{1,1}") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto q = cospot({1.0, 1.0}, {{{1, 1}, 1.0}});
  auto H = assemble_interval_nd(q, box, {4, 4});
  // diagonal entry of the lowest product mode: each factor integral
  // int_0^1 cos(pi x) 2 sin^2(pi x) dx = 0
  CHECK(H(0, 0) == doctest::Approx(2 * pi * pi).epsilon(1e-12));
}

TEST_CASE("separable assembly equals Kronecker sum") {
  BoxProblem box;
  box.sides = {1.0, std::sqrt(2.0)};
  box.bc = {{Bc::Dirichlet, Bc::Dirichlet}, {Bc::Neumann, Bc::Neumann}};
  auto q = cospot(box.sides, {{{1, 0}, 0.7}, {{0, 2}, 0.4}});
  auto H = assemble_interval_nd(q, box, {5, 6});
  Basis1D b1{Kind1D::DD, 1.0, 5}, b2{Kind1D::NN, std::sqrt(2.0), 6};
  auto A1 = assemble_1d(cosine_coeffs_1d(cospot({1.0}, {{{1}, 0.7}})), b1);
  auto A2 = assemble_1d(cosine_coeffs_1d(cospot({std::sqrt(2.0)}, {{{2}, 0.4}})), b2);
  Eigen::MatrixXd Kron = Eigen::MatrixXd::Zero(30, 30);
  for (int j1 = 0; j1 < 5; ++j1)
    for (int j2 = 0; j2 < 6; ++j2)
      for (int k1 = 0; k1 < 5; ++k1)
        for (int k2 = 0; k2 < 6; ++k2)
          Kron(j1 * 6 + j2, k1 * 6 + k2) =
              A1(j1, k1) * (j2 == k2 ? 1.0 : 0.0) + A2(j2, k2) * (j1 == k1 ? 1.0 : 0.0);
  CHECK((H - Kron).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("separable fast path agrees with the full solver") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, std::sqrt(2.0)});
  // free
  auto free3 = separable_spectrum({TrigPotential({1.0}), TrigPotential({std::sqrt(2.0)})},
                                  BoxProblem::all_dirichlet({1.0, 1.0}), 3, 32);
  CHECK(free3.eigenvalues[0] == doctest::Approx(2 * pi * pi));
  CHECK(free3.eigenvalues[1] == doctest::Approx(5 * pi * pi));
  CHECK(free3.eigenvalues[2] == doctest::Approx(5 * pi * pi));

  // q depending on x1 only
  auto q2d = cospot(box.sides, {{{1, 0}, 0.9}});
  auto full = solve_interval_nd(q2d, box, {16, 16}, false);
  auto fast = separable_spectrum(
      {cospot({1.0}, {{{1}, 0.9}}), TrigPotential({std::sqrt(2.0)})}, box, 50, 128);
  for (int i = 0; i < 50; ++i)
    CHECK(fast.eigenvalues[i] == doctest::Approx(full.eigenvalues[i]).epsilon(1e-9));

  // 3D free ground state
  auto f3 = separable_spectrum(
      {TrigPotential({1.0}), TrigPotential({1.0}), TrigPotential({1.0})},
      BoxProblem::all_dirichlet({1.0, 1.0, 1.0}), 5, 32);
  CHECK(f3.eigenvalues[0] == doctest::Approx(3 * pi * pi));

  CHECK_THROWS(separable_spectrum({TrigPotential({1.0}), TrigPotential({1.0})},
                                  BoxProblem::all_dirichlet({1.0, 1.0}), 100000, 16));
}

TEST_CASE("2D kernel: product structure, symmetry, boundary") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto s = solve_interval_nd(TrigPotential({1.0, 1.0}), box, {12, 12});
  auto s1 = solve_interval(TrigPotential({1.0}), Kind1D::DD, 1.0, 12);
  double t = 0.05;
  std::vector<double> x{0.3, 0.6}, y{0.7, 0.2};
  double k2 = kernel_nd(s, t, x, y);
  double prod = kernel_1d(s1, t, x[0], y[0]) * kernel_1d(s1, t, x[1], y[1]);
  CHECK(k2 == doctest::Approx(prod).epsilon(1e-10));
  CHECK(kernel_nd(s, t, y, x) == doctest::Approx(k2));
  CHECK(std::abs(kernel_nd(s, t, {0.0, 0.5}, x)) < 1e-9);
  CHECK_THROWS(kernel_nd(s, -1.0, x, y));
}

TEST_CASE("reflection isospectrality at solver level") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, std::sqrt(2.0)});
  auto q = cospot(box.sides, {{{1, 1}, 1.0}, {{2, 0}, 0.3}});
  auto a = solve_interval_nd(q, box, {14, 14}, false);
  auto b = solve_interval_nd(reflect_potential(q), box, {14, 14}, false);
  for (int i = 0; i < 50; ++i)
    CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-9));
}

TEST_CASE("torus spectrum invariant under lattice translation") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, std::sqrt(2.0)});
  auto q = cospot(box.sides, {{{1, 1}, 1.0}, {{2, 1}, 0.4}});
  // a lattice translation acts trivially on the coefficients; translating by
  // the half-lattice vector (a1, 0) is still a symmetry of the fully periodic
  // problem and flips the sign of every odd-m1 exponential
  TrigPotential shifted(q.sides());
  for (const auto& [m, c] : q.coeffs()) shifted.add_coeff(m, (m[0] % 2 == 0 ? c : -c));
  auto a = solve_torus_nd(q, box, {11, 11}, {false, false}, false);
  auto b = solve_torus_nd(shifted, box, {11, 11}, {false, false}, false);
  for (int i = 0; i < a.size(); ++i)
    CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("Weyl counting sanity in 2D") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  auto q = cospot(box.sides, {{{1, 1}, 0.5}});
  auto s = solve_interval_nd(q, box, {30, 30}, false);
  double lambda = s.eigenvalues[s.trusted() - 1];
  double count = s.trusted();
  double weyl = box.volume() * lambda / (4 * pi);
  CHECK(std::abs(count / weyl - 1.0) < 0.10);
}

TEST_CASE("size cap enforced") {
  BoxProblem box = BoxProblem::all_dirichlet({1.0, 1.0});
  CHECK_THROWS(assemble_interval_nd(TrigPotential({1.0, 1.0}), box, {200, 200}));
}
