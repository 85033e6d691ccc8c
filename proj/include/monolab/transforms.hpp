#pragma once

#include "monolab/series.hpp"

#include <optional>
#include <vector>

namespace monolab {

enum class TransformKind {
  Ramification,    // x_i = (x'_i)^lambda, generalized i
  Translation,     // y_j = y'_j + c, standard j
  BlowupChartA,    // x_i = x'_i, x_j = (x'_i)^lambda x'_j
  BlowupChartB,    // x_i = x'_i (x'_j)^(1/lambda), x_j = x'_j
  ReflectionPlus,  // y_i = +x'_{m+1}, converts standard variable to generalized
  ReflectionMinus, // y_i = -x'_{m+1}
  FaceZero,        // inclusion of the face {x_i = 0}; deletes variable i
};

/// A map nu : polydisk(source) -> polydisk(target). Substitution pulls back:
/// a series living on the target becomes a series on the source.
struct ElementaryTransform {
  TransformKind kind{};
  std::size_t i = 0;  // 0-based; for reflections this is the standard-block position
  std::size_t j = 0;  // second blow-up index
  Rational param;     // lambda for ramifications/blow-ups, c for translations
  VariableSignature source;
  VariableSignature target;

  static ElementaryTransform ramification(const VariableSignature& target,
                                          std::size_t i, const Rational& lambda);
  static ElementaryTransform translation(const VariableSignature& target,
                                         std::size_t j, const Rational& c);
  static ElementaryTransform blowup_a(const VariableSignature& target, std::size_t i,
                                      std::size_t j, const Rational& lambda);
  static ElementaryTransform blowup_b(const VariableSignature& target, std::size_t i,
                                      std::size_t j, const Rational& lambda);
  static ElementaryTransform reflection(const VariableSignature& target,
                                        std::size_t standard_pos, bool positive);
  static ElementaryTransform face_zero(const VariableSignature& target, std::size_t i);

  bool is_blowup() const {
    return kind == TransformKind::BlowupChartA || kind == TransformKind::BlowupChartB;
  }
  bool operator==(const ElementaryTransform& other) const = default;
};

/// Composition nu_1 o nu_2 o ... o nu_k, stored root-first: steps[0] maps into the
/// root space. Empty chain is the identity on root_sig.
struct TransformChain {
  VariableSignature root_sig;
  std::vector<ElementaryTransform> steps;

  static TransformChain identity(const VariableSignature& sig) {
    return TransformChain{sig, {}};
  }
  const VariableSignature& target_sig() const { return root_sig; }
  const VariableSignature& source_sig() const {
    return steps.empty() ? root_sig : steps.back().source;
  }
  /// Appends a step on the leaf side; its target must match the current source.
  void extend(const ElementaryTransform& t);
  void validate() const;
  bool operator==(const TransformChain& other) const = default;
};

/// The induced substitution homomorphism F -> F o nu (exact).
GenSeries apply_transform(const GenSeries& F, const ElementaryTransform& t);
GenSeries apply_transform(const GenSeries& F, const TransformChain& chain);

/// The unique variable one must divide by to invert a blow-up chart, as a
/// 0-based target-space index; nullopt for every other kind.
std::optional<std::size_t> critical_variable(const ElementaryTransform& t);

/// The critical variable pulled back to the chart's own source space. For both
/// charts this is a coordinate monomial.
GenSeries critical_pullback(const ElementaryTransform& t);

/// Pointwise action nu(p) for p in the source polydisk.
std::vector<double> map_point(const ElementaryTransform& t, const std::vector<double>& p);
std::vector<double> map_point(const TransformChain& chain, const std::vector<double>& p);

/// Numeric inverse on a target point; nullopt when the point is not in the image
/// (wrong sign side of a reflection, outside a face) or sits on a critical locus.
std::optional<std::vector<double>> invert_point(const ElementaryTransform& t,
                                                const std::vector<double>& p,
                                                double zero_tol = 1e-12);
std::optional<std::vector<double>> invert_point(const TransformChain& chain,
                                                const std::vector<double>& p,
                                                double zero_tol = 1e-12);

/// h_{a,sigma}(x) = (sigma_1 (x_1 - a_1), ..., sigma_d (x_d - a_d)).
/// The pointwise maps are always available; series pull-back is expressible in
/// the transform catalog only for standard variables with sigma = +1 (a
/// translation), collected in standard_chain.
struct Recentering {
  std::vector<Rational> center;
  std::vector<int> signs;  // entries in {-1, +1}
  TransformChain standard_chain;

  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> apply_inverse(const std::vector<double>& x) const;
};

Recentering recenter(const VariableSignature& sig, const std::vector<Rational>& a,
                     const std::vector<int>& signs);

} // namespace monolab
