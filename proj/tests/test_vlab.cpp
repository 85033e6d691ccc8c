#include "test_support.hpp"

#include "monolab/vlab.hpp"

#include <doctest.h>

#include <cmath>

using namespace monolab;
using namespace monolab::testing;

namespace {

Eigen::VectorXd seeded_vector(DetRng& rng, Eigen::Index size, double scale = 0.5) {
  Eigen::VectorXd v(size);
  for (Eigen::Index t = 0; t < size; ++t) v(t) = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

} // namespace

TEST_CASE("dyadic breakpoint enumeration") {
  auto bp = BreakpointSystem::dyadic(4);
  CHECK(bp.points[0] == Rational(0));
  CHECK(bp.points[1] == Rational(-1, 2));
  CHECK(bp.points[2] == Rational(1, 2));
  CHECK(bp.points[3] == Rational(-3, 4));
  CHECK(bp.points[4] == Rational(-1, 4));
  CHECK(bp.piece_count() == 6);
}

TEST_CASE("w_basis codimension") {
  SUBCASE("k = 0: the single continuity constraint") {
    auto bp = BreakpointSystem::dyadic(0);
    auto wb = w_basis(bp, 3);
    CHECK(wb.codim == 1);
    CHECK(wb.numeric_rank == 1);
    CHECK(static_cast<std::size_t>(wb.basis.cols()) == wb.ambient - 1);
  }
  SUBCASE("k = 1: codimension 3") {
    auto bp = BreakpointSystem::dyadic(1);
    auto wb = w_basis(bp, 5);
    CHECK(wb.codim == 3);
    CHECK(wb.numeric_rank == 3);
  }
  SUBCASE("numeric rank equals the exact codimension for k <= 5") {
    for (std::size_t k = 0; k <= 5; ++k) {
      auto bp = BreakpointSystem::dyadic(k);
      auto wb = w_basis(bp, 2 * k + 3);
      CHECK(wb.codim == w_codim(k));
      CHECK(static_cast<std::size_t>(wb.numeric_rank) == w_codim(k));
    }
  }
  SUBCASE("insufficient degree is reported") {
    auto bp = BreakpointSystem::dyadic(3);
    CHECK_THROWS_AS(w_basis(bp, 0), std::invalid_argument);
  }
}

TEST_CASE("membership: W elements satisfy the invariants, off-W fails") {
  auto bp = BreakpointSystem::dyadic(2);
  const std::size_t degree = 7;
  auto wb = w_basis(bp, degree);
  DetRng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));
    CHECK(h.validate());
  }
  // A generic ambient vector violates at least one matching constraint.
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto raw = element_from_coefficients(bp, degree,
                                         seeded_vector(rng, wb.ambient, 1.0));
    if (!raw.validate()) ++failures;
  }
  CHECK(failures == 20);
}

TEST_CASE("one_sided_jet") {
  // f = 0 on x < 0 and x^2 on x >= 0, over the single marked point a_0 = 0.
  auto bp = BreakpointSystem::dyadic(0);
  VElement f;
  f.bp = bp;
  f.degree = 2;
  f.pieces = {{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  REQUIRE(f.validate());

  auto left1 = one_sided_jet(f, Rational(0), 1, -1);
  auto right1 = one_sided_jet(f, Rational(0), 1, +1);
  CHECK(left1 == std::vector<double>{0.0, 0.0});
  CHECK(right1 == std::vector<double>{0.0, 0.0});

  auto left2 = one_sided_jet(f, Rational(0), 2, -1);
  auto right2 = one_sided_jet(f, Rational(0), 2, +1);
  CHECK(left2[2] == 0.0);
  CHECK(right2[2] == 2.0);

  // A single global polynomial has equal one-sided jets everywhere.
  VElement g;
  g.bp = bp;
  g.degree = 3;
  g.pieces = {{1.0, -2.0, 0.5, 0.25}, {1.0, -2.0, 0.5, 0.25}};
  for (std::size_t p = 0; p <= 3; ++p)
    CHECK(one_sided_jet(g, Rational(0), p, -1) == one_sided_jet(g, Rational(0), p, +1));
}

TEST_CASE("seminorm") {
  auto bp = BreakpointSystem::dyadic(0);
  VElement f;
  f.bp = bp;
  f.degree = 1;
  f.pieces = {{0.0, 1.0}, {0.0, 1.0}};  // f(x) = x

  CHECK(seminorm(f, -0.5, 0.5, 1) == doctest::Approx(1.0));
  CHECK(seminorm(f, -0.5, 0.5, 0) == doctest::Approx(0.5));

  VElement c;
  c.bp = bp;
  c.degree = 0;
  c.pieces = {{-3.0}, {-3.0}};
  for (std::size_t p = 0; p <= 4; ++p)
    CHECK(seminorm(c, -0.9, 0.9, p) == doctest::Approx(3.0));

  // Degenerate K = {a_0} inside S.
  CHECK(seminorm(f, 0.0, 0.0, 5) == 0.0);

  // Interior maxima are found through derivative roots: f = x - x^3 on one piece.
  VElement cubic;
  cubic.bp = bp;
  cubic.degree = 3;
  cubic.pieces = {{0.0, 1.0, 0.0, -1.0}, {0.0, 1.0, 0.0, -1.0}};
  const double expected = 1.0 / std::sqrt(3.0) - std::pow(1.0 / std::sqrt(3.0), 3.0);
  CHECK(seminorm(cubic, -0.9, 0.9, 0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("seminorm axioms on random pairs") {
  auto bp = BreakpointSystem::dyadic(1);
  const std::size_t degree = 5;
  auto wb = w_basis(bp, degree);
  DetRng rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    auto fa = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));
    auto fb = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));
    const double na = seminorm(fa, -0.7, 0.7, 2);
    const double nb = seminorm(fb, -0.7, 0.7, 2);
    const double nsum = seminorm(fa + fb, -0.7, 0.7, 2);
    CHECK(nsum <= na + nb + 1e-9);
    // Homogeneity: 2f through coefficient scaling.
    VElement doubled = fa + fa;
    CHECK(seminorm(doubled, -0.7, 0.7, 2) == doctest::Approx(2.0 * na).epsilon(1e-9));
    // Monotone in K and p.
    CHECK(seminorm(fa, -0.5, 0.5, 2) <= na + 1e-12);
    CHECK(seminorm(fa, -0.7, 0.7, 1) <= na + 1e-12);
  }
}

TEST_CASE("jet tuple lengths match the bookkeeping identities") {
  CHECK(jet_tuple_length(1, 2, 0) == 8);
  CHECK(jet_target_dim(1, 2, 0) == 9);
  CHECK(jet_tuple_length(0, 0, 0) == 1);
  CHECK(jet_target_dim(0, 0, 0) == 1);
  CHECK(jet_tuple_length(2, 3, 1) == 21);
  CHECK(jet_target_dim(2, 3, 1) == 23);

  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t k = 0; k <= 4; ++k)
      for (std::size_t p = k; p <= 8; ++p) {
        const std::size_t l = n * (p + 2) + 2 * (k + 1) * (p + 1) -
                              (k + 1) * (k + 2) / 2;
        CHECK(jet_target_dim(n, p, k) == l);
        // Tuple (x, a_0..a_k, jet) length from the transcendence bound.
        const std::size_t lhs = n + (k + 1) + jet_tuple_length(n, p, k);
        CHECK(lhs == n * (p + 2) + (k + 1) * (2 * p + 3) - (k + 1) * (k + 2) / 2);
      }
}

TEST_CASE("jet tuple evaluation and errors") {
  auto bp = BreakpointSystem::dyadic(1);
  const std::size_t degree = 8;
  auto wb = w_basis(bp, degree);
  DetRng rng(31);
  auto f = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));

  auto jet = jet_tuple(f, {0.3}, 1, 2, 0);
  CHECK(jet.size() == 8);
  CHECK(jet[0] == doctest::Approx(f.eval(0.3)));

  CHECK_THROWS_AS(jet_tuple(f, {0.3, 0.3}, 2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(jet_tuple(f, {0.0}, 1, 2, 0), std::invalid_argument);  // on S
  CHECK_THROWS_AS(jet_tuple(f, {0.3}, 1, 0, 1), std::invalid_argument);  // p < k
}

TEST_CASE("phi_jacobian matches finite differences and has full rank") {
  DetRng rng(41);
  for (const auto& [n, p, k] :
       std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
           {1, 2, 0}, {1, 3, 1}, {2, 3, 1}}) {
    auto bp = BreakpointSystem::dyadic(k);
    const std::size_t degree = (n + 2) * (p + 1) - 1;
    auto wb = w_basis(bp, degree);
    auto f = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));

    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> xs;
      while (xs.size() < n) {
        const double x = 0.82 * (2.0 * rng.uniform() - 1.0);
        bool clash = false;
        for (const auto& b : bp.sorted)
          if (std::abs(to_double(b) - x) < 0.05) clash = true;
        for (double other : xs)
          if (std::abs(other - x) < 0.05) clash = true;
        if (!clash) xs.push_back(x);
      }
      auto eps = seeded_vector(rng, wb.basis.cols(), 0.25);
      auto result = phi_jacobian(f, wb, eps, xs, n, p, k);
      CHECK(result.max_rel_err <= 1e-6);
      CHECK(result.rank == static_cast<long>(jet_target_dim(n, p, k)));

      // Exact oracle at the same (rational) points: the functional family
      // restricted to W has full rank, so the Jacobian rank above is genuine.
      std::vector<Rational> xs_exact;
      for (double x : xs) xs_exact.emplace_back(x);
      CHECK(jet_functional_exact_rank(bp, degree, xs_exact, n, p, k) ==
            jet_tuple_length(n, p, k));

      // delta = 0 direction sanity: the x-column of a first-bullet row is
      // (f + h_eps)^{(q+1)}(x_i).
      const VElement g =
          f + element_from_w(wb, bp, degree, eps);
      CHECK(result.closed_form(n + 0, 0) ==
            doctest::Approx(g.deriv(1, xs[0])).epsilon(1e-12));
    }
  }
}

TEST_CASE("avoidance_check") {
  auto bp = BreakpointSystem::dyadic(0);
  const std::size_t n = 1, p = 2, k = 0;
  const std::size_t degree = (n + 2) * (p + 1) - 1;
  auto wb = w_basis(bp, degree);

  // X = {first jet coordinate = 0}: for (n,p,k) = (1,2,0) the layout is
  // (x_1, f(x_1), f'(x_1), f''(x_1), ...), so coordinate 1 is f(x_1).
  JetPolynomial first_jet_zero;
  first_jet_zero.terms[{0, 1}] = Rational(1);

  SUBCASE("f = 1 never violates") {
    VElement one;
    one.bp = bp;
    one.degree = degree;
    one.pieces.assign(2, std::vector<double>(degree + 1, 0.0));
    one.pieces[0][0] = one.pieces[1][0] = 1.0;
    CHECK(avoidance_check(one, {first_jet_zero}, n, p, k, 25).empty());
  }
  SUBCASE("f = 0 violates everywhere on the grid") {
    VElement zero;
    zero.bp = bp;
    zero.degree = degree;
    zero.pieces.assign(2, std::vector<double>(degree + 1, 0.0));
    auto violations = avoidance_check(zero, {first_jet_zero}, n, p, k, 25);
    CHECK(violations.size() >= 20);  // all grid points off S
  }
  SUBCASE("random W perturbation avoids a nontrivial set") {
    DetRng rng(53);
    auto f = element_from_w(wb, bp, degree, seeded_vector(rng, wb.basis.cols()));
    CHECK(avoidance_check(f, {first_jet_zero}, n, p, k, 25).empty());
  }
}

TEST_CASE("phi rescaling and germ gluing") {
  CHECK(phi_rescale(0.0) == 0.0);
  CHECK(phi_rescale(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  auto bp = BreakpointSystem::dyadic(0);
  VElement f;
  f.bp = bp;
  f.degree = 3;
  f.pieces = {{0.0, 1.0, 0.0, 0.0}, {0.0, 1.0, 2.0, 5.0}};  // kink above order 0 at 0
  REQUIRE(f.validate());

  CHECK(eval_composed_phi(f, 0.0) == 0.0);

  // Glue at a = 1/2 (not a marked point) to order 1 from the right: the glued
  // polynomial matches value and first derivative, generally not the second.
  auto germ = glue_at(f, Rational(1, 2), 1, +1);
  const double a = 0.5;
  CHECK(germ.eval(a - 1e-9) == doctest::Approx(f.eval(a)).epsilon(1e-6));
  CHECK(germ.deriv(1, a - 1e-3) == doctest::Approx(f.deriv(1, a)).epsilon(1e-2));
  const double left_second = germ.deriv(2, a - 1e-6);
  const double right_second = f.deriv(2, a);
  CHECK(std::abs(left_second - right_second) > 1e-3);
}
