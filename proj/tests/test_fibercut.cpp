#include "test_support.hpp"

#include "monolab/fibercut.hpp"

#include <doctest.h>

#include <cmath>

using namespace monolab;
using namespace monolab::testing;

namespace {

SeriesMap product_map() {
  // eta(x1, x2) = x1 x2
  SeriesMap eta;
  eta.domain = sig_gen(2);
  GenSeries f = GenSeries::coordinate(eta.domain, 0) *
                GenSeries::coordinate(eta.domain, 1);
  eta.components = {f};
  return eta;
}

// Central-difference Jacobian, the independent oracle for the cleared matrix.
std::vector<std::vector<double>> fd_jacobian(const SeriesMap& eta,
                                             const std::vector<double>& x,
                                             double step = 1e-6) {
  std::vector<std::vector<double>> J(eta.output_dim(),
                                     std::vector<double>(eta.dim(), 0.0));
  for (std::size_t c = 0; c < eta.dim(); ++c) {
    auto hi = x, lo = x;
    hi[c] += step;
    lo[c] -= step;
    const auto fhi = eta.eval(hi), flo = eta.eval(lo);
    for (std::size_t r = 0; r < eta.output_dim(); ++r)
      J[r][c] = (fhi[r] - flo[r]) / (2.0 * step);
  }
  return J;
}

} // namespace

TEST_CASE("cleared jacobian of the identity in one variable") {
  SeriesMap eta;
  eta.domain = sig_gen(1);
  eta.components = {GenSeries::coordinate(eta.domain, 0)};
  auto cj = cleared_jacobian(eta, {0}, 1);
  CHECK(cj.a == GenSeries::coordinate(eta.domain, 0));
  CHECK(cj.A[0][0] == GenSeries::coordinate(eta.domain, 0));  // a * 1
}

TEST_CASE("cleared jacobian of eta = x1 x2, symbolic assembly") {
  auto eta = product_map();
  auto cj = cleared_jacobian(eta, {}, 1);
  // A = (x1 x2^2, x1^2 x2), frozen from the log-derivative assembly by hand.
  GenSeries expected0 =
      GenSeries::monomial(eta.domain, ev({Rational(1), Rational(2)}), Rational(1));
  GenSeries expected1 =
      GenSeries::monomial(eta.domain, ev({Rational(2), Rational(1)}), Rational(1));
  CHECK(cj.A[0][0] == expected0);
  CHECK(cj.A[0][1] == expected1);
  // Kernel direction (A_{12}, -A_{11}) = (x1 x2 * x1, -x1 x2 * x2).
  REQUIRE(cj.kernel.size() == 1);
  CHECK(cj.kernel[0][0] == expected1);
  CHECK(cj.kernel[0][1] == -expected0);
}

TEST_CASE("A = a * J_fd within 1e-6 relative at interior samples") {
  auto eta = product_map();
  auto cj = cleared_jacobian(eta, {}, 1);
  DetRng rng(3);
  for (int s = 0; s < 30; ++s) {
    std::vector<double> x{0.1 + 0.8 * rng.uniform(), 0.1 + 0.8 * rng.uniform()};
    const double ax = eval_numeric_unchecked(cj.a, x);
    auto J = fd_jacobian(eta, x);
    for (std::size_t c = 0; c < 2; ++c) {
      const double cleared = eval_numeric_unchecked(cj.A[0][c], x);
      const double expected = ax * J[0][c];
      CHECK(std::abs(cleared - expected) <= 1e-6 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("B * A' = det(A') * Id exactly as series") {
  // Two outputs over two variables so a genuine 2x2 selection exists.
  SeriesMap eta;
  eta.domain = sig_gen(2);
  GenSeries X = GenSeries::coordinate(eta.domain, 0);
  GenSeries Y = GenSeries::coordinate(eta.domain, 1);
  eta.components = {X + Y, X * Y};
  auto cj = cleared_jacobian(eta, {0, 1}, 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      GenSeries acc = GenSeries::zero(eta.domain);
      for (std::size_t t = 0; t < 2; ++t) acc = acc + cj.B[r][t] * cj.A_prime[t][c];
      if (r == c)
        CHECK(acc == cj.det_A_prime);
      else
        CHECK(acc.is_zero());
    }
}

TEST_CASE("rank profiling") {
  SUBCASE("graph of x2 = x1 has projected rank 1") {
    SeriesMap eta;
    eta.domain = sig_gen(1);
    GenSeries t = GenSeries::coordinate(eta.domain, 0);
    eta.components = {t, t};
    auto profile = rank_profile(eta, 1, 20, 0);
    REQUIRE(profile.stable);
    CHECK(profile.rank == 1);
  }
  SUBCASE("dimension-0 map has rank 0") {
    SeriesMap eta;
    eta.domain = sig_gen(0);
    eta.components = {};
    auto profile = rank_profile(eta, 1, 5, 0);
    CHECK(profile.stable);
    CHECK(profile.rank == 0);
  }
  SUBCASE("curve (t, t, t) projected to the first coordinate") {
    SeriesMap eta;
    eta.domain = sig_gen(1);
    GenSeries t = GenSeries::coordinate(eta.domain, 0);
    eta.components = {t, t, t};
    auto profile = rank_profile(eta, 1, 20, 0);
    REQUIRE(profile.stable);
    CHECK(profile.rank == 1);
  }
}

TEST_CASE("refine_by_rank on catalog charts") {
  const auto g2 = sig_gen(2);
  GenSeries f = GenSeries::coordinate(g2, 0) - GenSeries::coordinate(g2, 1);
  auto charts = build_local_parametrization(g2, {f});
  std::vector<Chart> raw;
  for (auto& pc : charts) raw.push_back(pc.chart);
  auto refined = refine_by_rank(raw, 2);
  REQUIRE(refined.size() >= raw.size());
  for (const auto& rc : refined) {
    const std::size_t d = rc.map.eta.dim();
    CHECK(rc.rank <= static_cast<long>(d));
    if (rc.rank > 0 && !rc.iota.empty()) CHECK(rc.iota[rc.rank - 1] < 2);
    // Constant rank on fresh samples.
    auto profile = rank_profile(rc.map.eta, 2, 25, 99);
    CHECK(profile.stable);
    CHECK(profile.rank == rc.rank);
  }
}

TEST_CASE("refinement splits a rank-jumping map") {
  // eta = (x1 + x2, (x1^2 + x2^2)/2): det J = x2 - x1 vanishes on the diagonal,
  // and the structured equal-coordinate samples sit exactly on it.
  SeriesMap eta;
  eta.domain = sig_gen(2);
  GenSeries X = GenSeries::coordinate(eta.domain, 0);
  GenSeries Y = GenSeries::coordinate(eta.domain, 1);
  eta.components = {X + Y, Rational(1, 2) * (X * X + Y * Y)};
  auto profile = rank_profile(eta, 2, 20, 0);
  CHECK_FALSE(profile.stable);

  Chart chart{TransformChain::identity(eta.domain), Quadrant::open(eta.domain)};
  auto refined = refine_by_rank({chart}, 2);
  REQUIRE_FALSE(refined.empty());
  for (const auto& rc : refined) {
    auto sub_profile = rank_profile(rc.map.eta, 2, 25, 123);
    CHECK(sub_profile.stable);
  }
}

TEST_CASE("fiber cutting in one variable is exact") {
  // Constant eta on (0, r): critical set of x(r' - x) is {r'/2}.
  SeriesMap eta;
  eta.domain = sig_gen(1);
  eta.components = {GenSeries::constant(eta.domain, Rational(1))};
  ClearedJacobian cj = cleared_jacobian(eta, {}, 0);
  auto system = fiber_cut_equations(eta, cj, 0);
  REQUIRE(system.equations.size() == 1);

  // The single equation is r' - 2x (in the doubled space).
  GenSeries expected(system.doubled);
  expected.accumulate(ev({Rational(0), Rational(1)}), Rational(1));
  expected.accumulate(ev({Rational(1), Rational(0)}), Rational(-2));
  CHECK(system.equations[0] == expected);

  auto report = verify_fiber_cut(eta, system, {Rational(1, 2)}, 20, 1);
  CHECK(report.failed == 0);
  // Root of r' - 2x at r' = 1/2 is x = 1/4; residual should be ~exact.
  CHECK(report.max_residual <= 1e-12);
}

TEST_CASE("equation count is d - l") {
  auto eta = product_map();
  auto cj = cleared_jacobian(eta, {}, 1);
  auto system = fiber_cut_equations(eta, cj, 1);
  CHECK(system.equations.size() == 1);
  CHECK_THROWS_AS(fiber_cut_equations(eta, cj, 2), std::invalid_argument);
}

TEST_CASE("fiber cutting for eta = x1 x2") {
  auto eta = product_map();
  auto cj = cleared_jacobian(eta, {}, 1);
  auto system = fiber_cut_equations(eta, cj, 1);

  auto witness = witness_certificate(eta, cj, system, 20, 5);
  CHECK(witness.ok);

  auto report = verify_fiber_cut(eta, system, {Rational(1, 2), Rational(1, 2)}, 50, 17);
  CHECK(report.attempted == 50);
  CHECK(report.failed == 0);
  CHECK(report.max_discrepancy <= 1e-6);
}
