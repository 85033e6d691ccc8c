#pragma once

#include "monolab/exponents.hpp"
#include "monolab/rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace monolab {

/// Finite-support generalized/mixed power series with exact rational
/// coefficients. Terms are kept in canonical (lexicographic) exponent order and
/// never store a zero coefficient.
struct GenSeries {
  VariableSignature sig;
  std::map<ExponentVector, Rational> terms;

  GenSeries() = default;
  explicit GenSeries(VariableSignature s) : sig(std::move(s)) {}

  static GenSeries zero(const VariableSignature& sig);
  static GenSeries constant(const VariableSignature& sig, const Rational& c);
  static GenSeries monomial(const VariableSignature& sig, const ExponentVector& e,
                            const Rational& c);
  /// The coordinate function X_i resp. Y_{i-m} (0-based absolute index).
  static GenSeries coordinate(const VariableSignature& sig, std::size_t index);

  bool is_zero() const { return terms.empty(); }
  std::size_t term_count() const { return terms.size(); }
  std::vector<ExponentVector> support() const;
  Rational coefficient(const ExponentVector& e) const;
  /// Adds c * X^e, erasing the term if it cancels.
  void accumulate(const ExponentVector& e, const Rational& c);
  void validate() const;

  bool operator==(const GenSeries& other) const {
    return sig == other.sig && terms == other.terms;
  }
};

GenSeries operator+(const GenSeries& a, const GenSeries& b);
GenSeries operator-(const GenSeries& a, const GenSeries& b);
GenSeries operator*(const GenSeries& a, const GenSeries& b);
GenSeries operator-(const GenSeries& a);
GenSeries operator*(const Rational& c, const GenSeries& a);

GenSeries add(const GenSeries& a, const GenSeries& b);
GenSeries mul(const GenSeries& a, const GenSeries& b);

/// F = X^gamma * U with U a unit (nonzero constant term); monomial * unit
/// reproduces the input exactly.
struct NormalDecomposition {
  ExponentVector monomial_exponent;
  GenSeries unit;
};

struct NormalStatus {
  enum class Kind { Normal, NotNormal, Zero };
  Kind kind = Kind::Zero;
  std::optional<NormalDecomposition> decomposition;           // set when Normal
  std::optional<std::pair<ExponentVector, ExponentVector>> witness;  // set when NotNormal

  bool is_normal() const { return kind == Kind::Normal; }
  bool is_zero() const { return kind == Kind::Zero; }
};

/// Normal iff F != 0 and supp F has a unique minimal exponent gamma; the unit is
/// F / X^gamma (exact exponent subtraction). NotNormal carries the first
/// incomparable pair of minimal exponents as witness.
NormalStatus normal_decompose(const GenSeries& F);

/// Order of F(0, ..., 0, Y_j) as a one-variable series; nullopt when that
/// restriction vanishes. j is the 0-based absolute index of a standard variable.
std::optional<long> y_regularity_order(const GenSeries& F, std::size_t j);

/// x_i d/dx_i, termwise c X^g -> (c g_i) X^g. Works for either variable block.
GenSeries log_derivative(const GenSeries& F, std::size_t i);

/// Plain d/dy_j on a standard variable (termwise exponent decrement).
GenSeries standard_derivative(const GenSeries& F, std::size_t j);

/// Sum over terms of c * point^gamma in canonical term order. Point must lie in
/// the closed polydisk with nonnegative generalized coordinates.
double eval_numeric(const GenSeries& F, const std::vector<double>& point);

/// As eval_numeric but skips the polydisk bound check (generalized coordinates
/// must still be nonnegative). Blow-up fibers legitimately exceed unit radius.
double eval_numeric_unchecked(const GenSeries& F, const std::vector<double>& point);

} // namespace monolab
