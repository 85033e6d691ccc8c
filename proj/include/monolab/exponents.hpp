#pragma once

#include "monolab/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace monolab {

/// Variable layout of a polydisk
///   [0, s_1) x ... x [0, s_m) x (-t_1, t_1) x ... x (-t_n, t_n).
/// The first m variables are generalized (one-sided, real exponents), the last n
/// standard (two-sided, integer exponents).
struct VariableSignature {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<Rational> polyradius;  // length m+n, all entries > 0

  std::size_t total() const { return m + n; }
  bool is_generalized(std::size_t index) const { return index < m; }
  void validate() const;

  bool operator==(const VariableSignature& other) const = default;

  /// Same layout, radii ignored. Substitution only needs the layout.
  bool same_layout(const VariableSignature& other) const {
    return m == other.m && n == other.n;
  }
};

/// Point of [0, inf)^(m+n) with rational entries. The mixed-series constraint
/// (integrality of the last n entries) is checked against a signature, since the
/// vector itself does not know the split.
struct ExponentVector {
  std::vector<Rational> entries;

  ExponentVector() = default;
  explicit ExponentVector(std::vector<Rational> e) : entries(std::move(e)) {}
  static ExponentVector zeros(std::size_t size);

  std::size_t size() const { return entries.size(); }
  const Rational& operator[](std::size_t i) const { return entries[i]; }
  Rational& operator[](std::size_t i) { return entries[i]; }

  bool is_zero() const;
  bool is_valid_for(const VariableSignature& sig) const;

  bool operator==(const ExponentVector& other) const { return entries == other.entries; }
  /// Lexicographic; this is the canonical exponent order used everywhere.
  bool operator<(const ExponentVector& other) const;
};

ExponentVector operator+(const ExponentVector& a, const ExponentVector& b);
ExponentVector operator-(const ExponentVector& a, const ExponentVector& b);

/// true iff a_i <= b_i for every i (the componentwise partial order; a is then a
/// minimal-side element relative to b). Throws SignatureError on length mismatch.
bool dominates(const ExponentVector& a, const ExponentVector& b);

bool comparable(const ExponentVector& a, const ExponentVector& b);

/// Minimal elements of S under the componentwise order, sorted canonically.
/// Duplicates in the input are ignored.
std::vector<ExponentVector> min_elements(const std::vector<ExponentVector>& S);

/// All unordered pairs {a, b} of distinct elements with neither dominating the
/// other. Each pair is (lex-smaller, lex-larger); the list is in canonical order.
std::vector<std::pair<ExponentVector, ExponentVector>>
incomparable_pairs(const std::vector<ExponentVector>& S);

} // namespace monolab
