#include "test_support.hpp"

#include "monolab/errors.hpp"
#include "monolab/transforms.hpp"

#include <doctest.h>

#include <cmath>

using namespace monolab;
using namespace monolab::testing;

namespace monolab::testing {

/// Deterministic random transform valid for the given target signature; never a
/// face map (those are stratum utilities, not elementary transformations).
ElementaryTransform random_transform(DetRng& rng, const VariableSignature& target) {
  for (;;) {
    switch (rng.next() % 5) {
      case 0: {
        if (target.m == 0) break;
        const std::size_t i = rng.next() % target.m;
        return ElementaryTransform::ramification(target, i,
                                                 Rational(rng.range(1, 4), rng.range(1, 3)));
      }
      case 1: {
        if (target.n == 0) break;
        const std::size_t j = target.m + rng.next() % target.n;
        const Rational c = target.polyradius[j] * Rational(rng.range(-1, 1), 3);
        return ElementaryTransform::translation(target, j, c);
      }
      case 2: {
        if (target.m < 2) break;
        std::size_t i = rng.next() % target.m, j = rng.next() % target.m;
        if (i == j) break;
        return ElementaryTransform::blowup_a(target, i, j,
                                             Rational(rng.range(1, 4), rng.range(1, 3)));
      }
      case 3: {
        if (target.m < 2) break;
        std::size_t i = rng.next() % target.m, j = rng.next() % target.m;
        if (i == j) break;
        return ElementaryTransform::blowup_b(target, i, j,
                                             Rational(rng.range(1, 4), rng.range(1, 3)));
      }
      case 4: {
        if (target.n == 0) break;
        return ElementaryTransform::reflection(target, rng.next() % target.n,
                                               rng.next() % 2 == 0);
      }
    }
  }
}

} // namespace monolab::testing

namespace {

const VariableSignature g2 = sig_gen(2);

GenSeries x1() { return GenSeries::coordinate(g2, 0); }
GenSeries x2() { return GenSeries::coordinate(g2, 1); }

std::vector<double> sample_source(DetRng& rng, const VariableSignature& sig) {
  std::vector<double> p(sig.total());
  for (std::size_t v = 0; v < sig.total(); ++v) {
    const double r = to_double(sig.polyradius[v]);
    p[v] = sig.is_generalized(v) ? 0.9 * r * rng.uniform()
                                 : 0.9 * r * (2.0 * rng.uniform() - 1.0);
  }
  return p;
}

} // namespace

TEST_CASE("reflection replaces a standard variable") {
  const auto sig = sig_mixed(1, 1);
  GenSeries f = GenSeries::coordinate(sig, 0) + GenSeries::coordinate(sig, 1);
  auto t = ElementaryTransform::reflection(sig, 0, true);
  GenSeries image = apply_transform(f, t);
  CHECK(image.sig.m == 2);
  CHECK(image.sig.n == 0);
  CHECK(image == GenSeries::coordinate(image.sig, 0) + GenSeries::coordinate(image.sig, 1));

  auto tminus = ElementaryTransform::reflection(sig, 0, false);
  // The replacement variable is x'_{m+1}, i.e. index m of the source space.
  GenSeries xm = GenSeries::coordinate(tminus.source, 1);
  GenSeries odd = apply_transform(GenSeries::coordinate(sig, 1), tminus);
  CHECK(odd == -xm);
  // Even powers are insensitive to the sign.
  GenSeries y2 = GenSeries::coordinate(sig, 1) * GenSeries::coordinate(sig, 1);
  CHECK(apply_transform(y2, tminus) == xm * xm);
}

TEST_CASE("blow-up chart A factors X1 - X2") {
  auto t = ElementaryTransform::blowup_a(g2, 0, 1, Rational(1));
  GenSeries image = apply_transform(x1() - x2(), t);
  // X1 - X1 X2 = X1 (1 - X2), frozen by recomputing the support by hand.
  GenSeries expected(t.source);
  expected.accumulate(ev({Rational(1), Rational(0)}), Rational(1));
  expected.accumulate(ev({Rational(1), Rational(1)}), Rational(-1));
  CHECK(image == expected);
}

TEST_CASE("ramification rescales one exponent") {
  const auto sig = sig_gen(1);
  GenSeries f = GenSeries::monomial(sig, ev({Rational(1, 2)}), Rational(1));
  auto t = ElementaryTransform::ramification(sig, 0, Rational(2));
  CHECK(apply_transform(f, t) == GenSeries::coordinate(t.source, 0));
}

TEST_CASE("translation expands binomially") {
  const auto sig = sig_mixed(0, 1, Rational(4));
  GenSeries y = GenSeries::coordinate(sig, 0);
  auto t = ElementaryTransform::translation(sig, 0, Rational(1));
  // (Y + 1)^2 = Y^2 + 2Y + 1
  GenSeries image = apply_transform(y * y, t);
  GenSeries yy = GenSeries::coordinate(t.source, 0);
  CHECK(image == yy * yy + Rational(2) * yy + GenSeries::constant(t.source, Rational(1)));
  CHECK_THROWS_AS(ElementaryTransform::translation(sig_gen(1), 0, Rational(1)),
                  SignatureError);
}

TEST_CASE("face map drops positive exponents of the deleted variable") {
  GenSeries f = x1() - x2();
  auto t = ElementaryTransform::face_zero(g2, 1);
  GenSeries image = apply_transform(f, t);
  CHECK(image == GenSeries::coordinate(t.source, 0));
  CHECK(apply_transform(x2(), t).is_zero());
}

TEST_CASE("critical variables") {
  auto a = ElementaryTransform::blowup_a(g2, 0, 1, Rational(3, 2));
  auto b = ElementaryTransform::blowup_b(g2, 0, 1, Rational(3, 2));
  CHECK(critical_variable(a) == 0);  // divide by x_i to invert chart A
  CHECK(critical_variable(b) == 1);
  CHECK_FALSE(critical_variable(ElementaryTransform::ramification(g2, 0, Rational(2)))
                  .has_value());
  CHECK(critical_pullback(a) == GenSeries::coordinate(a.source, 0));
  CHECK(critical_pullback(b) == GenSeries::coordinate(b.source, 1));
}

TEST_CASE("map_point formulas") {
  // Radius 4 keeps the sample point interior to the chart's shrunken base.
  auto tA = ElementaryTransform::blowup_a(sig_gen(2, Rational(4)), 0, 1, Rational(1));
  auto img = map_point(tA, {0.5, 0.2});
  CHECK(img[0] == doctest::Approx(0.5));
  CHECK(img[1] == doctest::Approx(0.1));

  const auto sig = sig_mixed(1, 1);
  auto refl = ElementaryTransform::reflection(sig, 0, false);
  auto p = map_point(refl, {0.4, 0.3});
  CHECK(p[0] == doctest::Approx(0.4));
  CHECK(p[1] == doctest::Approx(-0.3));

  const auto sigy = sig_mixed(0, 1, Rational(4));
  auto tr = ElementaryTransform::translation(sigy, 0, Rational(1));
  CHECK(map_point(tr, {0.2})[0] == doctest::Approx(1.2));

  CHECK_THROWS_AS(map_point(tA, {5.0, 0.1}), std::domain_error);
}

TEST_CASE("substitution is a ring homomorphism and injective") {
  DetRng rng(99);
  for (int trial = 0; trial < 120; ++trial) {
    const auto sig = sig_mixed(1 + rng.next() % 2, rng.next() % 2);
    GenSeries F = random_series(rng, sig), G = random_series(rng, sig);
    auto t = random_transform(rng, sig);
    CHECK(apply_transform(F + G, t) == apply_transform(F, t) + apply_transform(G, t));
    CHECK(apply_transform(F * G, t) == apply_transform(F, t) * apply_transform(G, t));
    if (!F.is_zero()) CHECK_FALSE(apply_transform(F, t).is_zero());
  }
}

TEST_CASE("evaluation commutes with substitution") {
  DetRng rng(123);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto sig = sig_mixed(1 + rng.next() % 2, rng.next() % 2);
    GenSeries F = random_series(rng, sig);
    auto t = random_transform(rng, sig);
    for (int s = 0; s < 5; ++s) {
      auto p = sample_source(rng, t.source);
      const double direct = eval_numeric_unchecked(apply_transform(F, t), p);
      const double through = eval_numeric_unchecked(F, map_point(t, p));
      CHECK(std::abs(direct - through) <= 1e-9 * (1.0 + std::abs(through)));
      ++checked;
    }
  }
  CHECK(checked == 300);
}

TEST_CASE("chains compose associatively") {
  DetRng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sig = sig_mixed(2, 1);
    GenSeries F = random_series(rng, sig);
    auto t1 = random_transform(rng, sig);
    auto t2 = random_transform(rng, t1.source);
    TransformChain chain = TransformChain::identity(sig);
    chain.extend(t1);
    chain.extend(t2);
    chain.validate();
    CHECK(apply_transform(F, chain) ==
          apply_transform(apply_transform(F, t1), t2));
  }
}

TEST_CASE("pair equalization: both charts settle the blown coordinate pair") {
  DetRng rng(31);
  int found = 0;
  while (found < 60) {
    const std::size_t m = 2 + rng.next() % 2;
    const auto sig = sig_gen(m);
    ExponentVector alpha = ExponentVector::zeros(m), beta = ExponentVector::zeros(m);
    for (std::size_t v = 0; v < m; ++v) {
      alpha[v] = Rational(rng.range(0, 5), 1 + (rng.next() % 2));
      beta[v] = Rational(rng.range(0, 5), 1 + (rng.next() % 2));
    }
    if (comparable(alpha, beta)) continue;
    ++found;
    std::size_t i = m, j = m;
    for (std::size_t v = 0; v < m; ++v) {
      if (i == m && alpha[v] > beta[v]) i = v;
      if (j == m && alpha[v] < beta[v]) j = v;
    }
    const Rational lambda = (alpha[i] - beta[i]) / (beta[j] - alpha[j]);

    auto tA = ElementaryTransform::blowup_a(sig, i, j, lambda);
    auto tB = ElementaryTransform::blowup_b(sig, i, j, lambda);
    for (const auto& t : {tA, tB}) {
      GenSeries fa = apply_transform(GenSeries::monomial(sig, alpha, Rational(1)), t);
      GenSeries fb = apply_transform(GenSeries::monomial(sig, beta, Rational(1)), t);
      const ExponentVector ia = fa.terms.begin()->first;
      const ExponentVector ib = fb.terms.begin()->first;
      // The i and j coordinates of the images are comparable after either chart:
      // chart A equalizes coordinate i, chart B coordinate j.
      const bool pair_settled = (ia[i] <= ib[i] && ia[j] <= ib[j]) ||
                                (ia[i] >= ib[i] && ia[j] >= ib[j]);
      CHECK(pair_settled);
      if (t.kind == TransformKind::BlowupChartA) CHECK(ia[i] == ib[i]);
      if (t.kind == TransformKind::BlowupChartB) CHECK(ia[j] == ib[j]);
    }

    // With two variables the whole pair becomes comparable in both charts.
    if (m == 2) {
      for (const auto& t : {tA, tB}) {
        GenSeries fa = apply_transform(GenSeries::monomial(sig, alpha, Rational(1)), t);
        GenSeries fb = apply_transform(GenSeries::monomial(sig, beta, Rational(1)), t);
        CHECK(comparable(fa.terms.begin()->first, fb.terms.begin()->first));
      }
    }
  }
}

TEST_CASE("recenter") {
  const auto sig = sig_gen(1, Rational(3));
  SUBCASE("identity when a = 0 and all signs positive") {
    auto rec = recenter(sig, {Rational(0)}, {1});
    CHECK(rec.standard_chain.steps.empty());
    CHECK(rec.apply({0.7})[0] == doctest::Approx(0.7));
  }
  SUBCASE("flip about a center") {
    auto rec = recenter(sig, {Rational(1)}, {-1});
    CHECK(rec.apply({1.0})[0] == doctest::Approx(0.0));
    CHECK(rec.apply({0.25})[0] == doctest::Approx(0.75));
  }
  SUBCASE("round-trip on samples") {
    DetRng rng(3);
    const auto sigm = sig_mixed(1, 1, Rational(2));
    auto rec = recenter(sigm, {Rational(1, 2), Rational(1, 4)}, {-1, 1});
    for (int s = 0; s < 20; ++s) {
      std::vector<double> p{2.0 * rng.uniform(), 2.0 * rng.uniform() - 1.0};
      auto q = rec.apply_inverse(rec.apply(p));
      CHECK(q[0] == doctest::Approx(p[0]).epsilon(1e-12));
      CHECK(q[1] == doctest::Approx(p[1]).epsilon(1e-12));
    }
    // The sigma=+1 standard part is expressible as a translation chain.
    CHECK(rec.standard_chain.steps.size() == 1);
    CHECK(rec.standard_chain.steps[0].kind == TransformKind::Translation);
  }
}
