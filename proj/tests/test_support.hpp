#pragma once

#include "monolab/series.hpp"
#include "monolab/transforms.hpp"

#include <cstdint>
#include <vector>

namespace monolab::testing {

/// splitmix64; pinned so that seeded data is identical on every platform.
struct DetRng {
  std::uint64_t state;
  explicit DetRng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
  // in [lo, hi]
  long range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline VariableSignature sig_gen(std::size_t m, const Rational& r = Rational(1)) {
  VariableSignature s;
  s.m = m;
  s.n = 0;
  s.polyradius.assign(m, r);
  return s;
}

inline VariableSignature sig_mixed(std::size_t m, std::size_t n,
                                   const Rational& r = Rational(1)) {
  VariableSignature s;
  s.m = m;
  s.n = n;
  s.polyradius.assign(m + n, r);
  return s;
}

inline ExponentVector ev(std::vector<Rational> entries) {
  return ExponentVector(std::move(entries));
}

/// Random finite-support series with small rational data, valid for sig.
inline GenSeries random_series(DetRng& rng, const VariableSignature& sig,
                               std::size_t max_terms = 5) {
  GenSeries out(sig);
  const std::size_t count = 1 + rng.next() % max_terms;
  for (std::size_t t = 0; t < count; ++t) {
    ExponentVector e = ExponentVector::zeros(sig.total());
    for (std::size_t v = 0; v < sig.total(); ++v) {
      if (sig.is_generalized(v)) {
        e[v] = Rational(rng.range(0, 6), 1 + 2 * (rng.next() % 2));  // den 1 or 3
      } else {
        e[v] = Rational(rng.range(0, 4));
      }
    }
    Rational c(rng.range(-5, 5));
    out.accumulate(e, c);
  }
  return out;
}

/// Brute-force oracle: keep exactly the elements not strictly dominated by
/// another distinct element (pairwise scan, no shortcuts).
std::vector<ExponentVector> oracle_min_elements(const std::vector<ExponentVector>& S);

/// Brute-force expand-and-collect product used as the multiplication oracle.
GenSeries oracle_mul(const GenSeries& a, const GenSeries& b);

} // namespace monolab::testing
