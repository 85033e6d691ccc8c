#pragma once

#include "monolab/transforms.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace monolab {

/// Status of one tracked series at a leaf, with the substituted series kept for
/// independent re-verification.
struct SeriesStatus {
  NormalStatus status;
  GenSeries snapshot;
};

/// One entry of the critical-variable ledger: the blow-up sits at position
/// chain_pos in the branch chain, its critical variable (target space of that
/// step) is critical_index, and status describes the pulled-back coordinate at
/// the leaf.
struct LedgerEntry {
  std::size_t chain_pos = 0;
  std::size_t critical_index = 0;
  SeriesStatus status;
};

enum class ForkKind { Blowup, Reflection };

/// Admissible tree. Forks carry exactly two children: blow-up charts A and B, or
/// the two reflections sigma+ / sigma-. Every branch is finite.
struct AdmissibleTree {
  VariableSignature sig;
  bool leaf = true;

  // leaf payload
  std::vector<SeriesStatus> series_status;  // one per tracked input series
  std::vector<LedgerEntry> ledger;          // one per blow-up ancestor (star mode)

  // fork payload
  ForkKind fork = ForkKind::Blowup;
  std::vector<std::pair<ElementaryTransform, std::unique_ptr<AdmissibleTree>>> children;

  std::size_t leaf_count() const;
};

/// Builds an admissible tree whose every branch makes each input Normal or Zero.
/// Works on the product of the nonzero inputs; incomparable minimal exponents are
/// resolved by reflection forks (standard variables) or weighted blow-up forks.
/// Throws DepthExhausted when a branch would exceed max_depth forks.
AdmissibleTree monomialize(const std::vector<GenSeries>& series, std::size_t max_depth);

/// As monomialize, and additionally records the critical-variable ledger: below
/// every blow-up chart the chart's critical variable stays Normal (or Zero) at
/// every leaf. All catalog transforms map monomials to monomials, so the engine
/// only needs to track them; verify_tree re-checks the condition from scratch.
AdmissibleTree star_monomialize(const std::vector<GenSeries>& series,
                                std::size_t max_depth);

/// Chains induced by the branches, in left-to-right branch order.
std::vector<TransformChain> branch_charts(const AdmissibleTree& tree);

struct BranchReport {
  TransformChain chain;
  std::vector<SeriesStatus> series_status;
  std::vector<LedgerEntry> ledger;
};

struct VerifyOutcome {
  bool ok = false;
  std::vector<BranchReport> reports;
  std::string failure;  // empty when ok
};

/// Recomputes every branch substitution from the root using only the series and
/// transform layers, then checks leaf statuses, fork shapes and the
/// critical-variable condition. Stored snapshots, when present, must agree
/// exactly with the recomputation.
VerifyOutcome verify_tree(const AdmissibleTree& tree,
                          const std::vector<GenSeries>& series);

} // namespace monolab
