#pragma once

#include "monolab/trees.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace monolab {

enum class Selector : std::uint8_t { Zero, Positive, Negative };

/// Sub-quadrant of a polydisk: one selector per variable. Generalized variables
/// admit Zero/Positive, standard ones Zero/Negative/Positive. The signature's
/// polyradius carries the (possibly shrunken) certified radius of the quadrant.
struct Quadrant {
  VariableSignature sig;
  std::vector<Selector> selectors;

  static Quadrant open(const VariableSignature& sig);  // all Positive
  std::size_t dimension() const;
  void validate() const;
  bool operator==(const Quadrant& other) const = default;
};

/// A composed admissible transformation restricted to a sub-quadrant domain.
/// domain.sig has the same layout as chain.source_sig() but its radii may be
/// smaller (the certified radius).
struct Chart {
  TransformChain chain;
  Quadrant domain;
};

/// f(x) = 0, g_1(x) > 0, ..., g_p(x) > 0 on the polydisk of the signature.
struct BasicSetDescriptor {
  GenSeries f;
  std::vector<GenSeries> gs;
  VariableSignature sig;

  void validate() const;
};

/// Exact certificate that the unit keeps the sign of its constant term on the
/// closed box of the given radius: sum_{gamma != 0} |c_gamma| r^gamma < |c_0|,
/// checked with sound rational upper bounds on the fractional powers.
bool radius_certified(const NormalDecomposition& nd, const std::vector<Rational>& radius);

/// Shrinks start by uniform halving until radius_certified holds; the constant
/// term must be nonzero. Always terminates since the bound tends to zero.
std::vector<Rational> validity_radius(const NormalDecomposition& nd,
                                      const std::vector<Rational>& start);

/// Sign of X^gamma * U on the quadrant: 0 when a positive exponent meets a Zero
/// selector, otherwise sign of the unit constant adjusted by the parity of
/// odd-exponent Negative selectors. Requires the quadrant radius certified.
int sign_on_quadrant(const NormalDecomposition& nd, const Quadrant& q);

struct ParamChart {
  Chart chart;
  std::vector<int> signs;  // one entry per requested compat function
};

struct ParamOptions {
  std::size_t max_depth = 64;
  Rational radius_scale = Rational(1);  // applied to the target radius up front
  unsigned scale_bits = 10;             // resolution of the certified-radius search
};

/// Local parametrization of the polydisk at 0, compatible with the compat
/// functions: injective charts (no ancestor critical variable vanishes on the
/// domain) with a constant sign per chart for each compat function. Strata where
/// both blown-up variables vanish are covered through face recursion.
std::vector<ParamChart> build_local_parametrization(const VariableSignature& target,
                                                    const std::vector<GenSeries>& compat,
                                                    const ParamOptions& opt = {});

/// Refinement for a basic set: only charts with sign(f) = 0 and sign(g_i) = +1
/// are retained; reported signs are those of the extra compat functions.
std::vector<ParamChart> build_local_parametrization(const BasicSetDescriptor& target,
                                                    const std::vector<GenSeries>& compat,
                                                    const ParamOptions& opt = {});

/// Exact certificate used by the builder: no critical variable of any ancestor
/// blow-up in the chain vanishes on the quadrant.
bool certify_injective(const Chart& chart);

/// Re-expresses a chart of a reduced variable set in a larger space. The
/// inserted positions (sorted, generalized) ride along untouched and their
/// selectors are pinned to Zero.
Chart lift_chart(const Chart& reduced, const VariableSignature& full_root,
                 const std::vector<std::size_t>& inserted_positions);

/// Membership through explicit chain inversion; nullopt when the point is not in
/// the chart image. Points on critical loci are rejected.
std::optional<std::vector<double>> invert_chart(const Chart& chart,
                                                const std::vector<double>& target_point,
                                                double zero_tol = 1e-12);

struct CoveringReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  double fraction = 0.0;
  std::vector<double> sample_radius;  // box that was sampled
};

/// Samples the target box within the joint certified radius of the
/// full-dimensional charts and reports the fraction of samples claimed by some
/// chart. An optional membership predicate restricts sampling to a subset.
CoveringReport covering_check(const std::vector<ParamChart>& charts,
                              const VariableSignature& target, std::size_t samples,
                              std::uint64_t seed,
                              const std::function<bool(const std::vector<double>&)>*
                                  member = nullptr);

/// Per-chart sign constancy on random interior samples of the certified domain:
/// strict signs need |value| > strict_margin, zero signs |value| <= zero_tol.
struct SignCheckReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;
};
SignCheckReport sign_constancy_check(const ParamChart& chart,
                                     const std::vector<GenSeries>& compat,
                                     std::size_t samples, std::uint64_t seed,
                                     double strict_margin = 1e-12,
                                     double zero_tol = 1e-9);

} // namespace monolab
