#include "monolab/trees.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace monolab {

std::size_t AdmissibleTree::leaf_count() const {
  if (leaf) return 1;
  std::size_t total = 0;
  for (const auto& [t, child] : children) total += child->leaf_count();
  return total;
}

namespace {

struct TrackedMonomial {
  std::size_t chain_pos;
  std::size_t critical_index;
  GenSeries series;
};

struct EngineState {
  GenSeries product;
  std::vector<GenSeries> inputs;
  std::vector<TrackedMonomial> tracked;
};

SeriesStatus make_status(const GenSeries& s) {
  return SeriesStatus{normal_decompose(s), s};
}

EngineState pushed(const EngineState& state, const ElementaryTransform& t) {
  EngineState next;
  next.product = apply_transform(state.product, t);
  next.inputs.reserve(state.inputs.size());
  for (const auto& f : state.inputs) next.inputs.push_back(apply_transform(f, t));
  next.tracked.reserve(state.tracked.size());
  for (const auto& m : state.tracked)
    next.tracked.push_back({m.chain_pos, m.critical_index, apply_transform(m.series, t)});
  return next;
}

std::unique_ptr<AdmissibleTree> build(const EngineState& state, std::size_t depth,
                                      std::size_t chain_pos, std::size_t max_depth,
                                      bool track_critical) {
  auto node = std::make_unique<AdmissibleTree>();
  node->sig = state.product.sig;

  const NormalStatus product_status = normal_decompose(state.product);
  if (product_status.kind != NormalStatus::Kind::NotNormal) {
    node->leaf = true;
    for (const auto& f : state.inputs) node->series_status.push_back(make_status(f));
    for (const auto& m : state.tracked)
      node->ledger.push_back({m.chain_pos, m.critical_index, make_status(m.series)});
    return node;
  }

  if (depth >= max_depth) throw DepthExhausted(max_depth);

  // Canonical selection: the two lex-smallest minimal exponents, oriented so
  // that alpha is the lex-larger one. The first conflicting index then has
  // alpha_i > beta_i, which keeps i < j.
  const auto mins = min_elements(state.product.support());
  const ExponentVector& alpha = mins[1];
  const ExponentVector& beta = mins[0];
  std::size_t i = alpha.size(), j = alpha.size();
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (i == alpha.size() && alpha[v] > beta[v]) i = v;
    if (j == alpha.size() && alpha[v] < beta[v]) j = v;
  }

  const std::size_t m = node->sig.m;
  node->leaf = false;

  if (i >= m || j >= m) {
    // Reflection-first: convert the standard variable into a generalized one.
    std::size_t std_index = std::min(i >= m ? i : alpha.size(),
                                     j >= m ? j : alpha.size());
    const std::size_t pos = std_index - m;
    node->fork = ForkKind::Reflection;
    for (bool positive : {true, false}) {
      auto t = ElementaryTransform::reflection(node->sig, pos, positive);
      auto child = build(pushed(state, t), depth + 1, chain_pos + 1, max_depth,
                         track_critical);
      node->children.emplace_back(std::move(t), std::move(child));
    }
    return node;
  }

  const Rational lambda = (alpha[i] - beta[i]) / (beta[j] - alpha[j]);
  node->fork = ForkKind::Blowup;
  for (bool chart_a : {true, false}) {
    auto t = chart_a ? ElementaryTransform::blowup_a(node->sig, i, j, lambda)
                     : ElementaryTransform::blowup_b(node->sig, i, j, lambda);
    EngineState next = pushed(state, t);
    if (track_critical)
      next.tracked.push_back({chain_pos, *critical_variable(t), critical_pullback(t)});
    auto child =
        build(next, depth + 1, chain_pos + 1, max_depth, track_critical);
    node->children.emplace_back(std::move(t), std::move(child));
  }
  return node;
}

AdmissibleTree run_engine(const std::vector<GenSeries>& series, std::size_t max_depth,
                          bool track_critical) {
  if (series.empty())
    throw std::invalid_argument("monomialize: need at least one series");
  if (max_depth < 1) throw std::invalid_argument("monomialize: max_depth must be >= 1");
  const VariableSignature sig = series.front().sig;
  for (const auto& f : series)
    if (!(f.sig == sig)) throw SignatureError("monomialize: signatures differ");

  EngineState state;
  state.inputs = series;
  // The product of the nonzero inputs drives the branching; a zero input is Zero
  // on every branch regardless. Product is zero only if every input is zero.
  state.product = GenSeries::constant(sig, Rational(1));
  bool any_nonzero = false;
  for (const auto& f : series)
    if (!f.is_zero()) {
      state.product = state.product * f;
      any_nonzero = true;
    }
  if (!any_nonzero) state.product = GenSeries::zero(sig);

  auto root = build(state, 0, 0, max_depth, track_critical);
  return std::move(*root);
}

} // namespace

AdmissibleTree monomialize(const std::vector<GenSeries>& series,
                           std::size_t max_depth) {
  return run_engine(series, max_depth, false);
}

AdmissibleTree star_monomialize(const std::vector<GenSeries>& series,
                                std::size_t max_depth) {
  return run_engine(series, max_depth, true);
}

namespace {

void collect_chains(const AdmissibleTree& node, TransformChain chain,
                    std::vector<TransformChain>& out) {
  if (node.leaf) {
    out.push_back(std::move(chain));
    return;
  }
  for (const auto& [t, child] : node.children) {
    TransformChain extended = chain;
    extended.extend(t);
    collect_chains(*child, std::move(extended), out);
  }
}

} // namespace

std::vector<TransformChain> branch_charts(const AdmissibleTree& tree) {
  std::vector<TransformChain> out;
  collect_chains(tree, TransformChain::identity(tree.sig), out);
  return out;
}

namespace {

struct Verifier {
  const std::vector<GenSeries>& inputs;
  std::vector<BranchReport> reports;
  std::string failure;

  bool fail(std::size_t branch, const std::string& reason) {
    std::ostringstream oss;
    oss << "branch " << branch << ": " << reason;
    failure = oss.str();
    return false;
  }

  bool status_equal(const NormalStatus& a, const NormalStatus& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NormalStatus::Kind::Normal) {
      return a.decomposition->monomial_exponent == b.decomposition->monomial_exponent &&
             a.decomposition->unit == b.decomposition->unit;
    }
    return true;
  }

  bool walk(const AdmissibleTree& node, const TransformChain& chain) {
    if (!(node.sig == chain.source_sig()))
      return fail(reports.size(), "node signature does not match its chain");

    if (node.leaf) {
      BranchReport report;
      report.chain = chain;
      const std::size_t branch = reports.size();
      for (std::size_t s = 0; s < inputs.size(); ++s) {
        GenSeries pulled = apply_transform(inputs[s], chain);
        NormalStatus fresh = normal_decompose(pulled);
        if (fresh.kind == NormalStatus::Kind::NotNormal) {
          std::ostringstream oss;
          oss << "series " << s << " is not normal at the leaf";
          return fail(branch, oss.str());
        }
        if (s < node.series_status.size()) {
          if (!(node.series_status[s].snapshot == pulled))
            return fail(branch, "stored snapshot differs from recomputation for series " +
                                    std::to_string(s));
          if (!status_equal(node.series_status[s].status, fresh))
            return fail(branch, "stored status differs from recomputation for series " +
                                    std::to_string(s));
        }
        report.series_status.push_back({std::move(fresh), std::move(pulled)});
      }
      if (node.series_status.size() > inputs.size())
        return fail(branch, "leaf records more series than were given");

      // Critical-variable condition, recomputed from the chain itself.
      for (std::size_t pos = 0; pos < chain.steps.size(); ++pos) {
        const auto& step = chain.steps[pos];
        if (!step.is_blowup()) continue;
        GenSeries w = critical_pullback(step);
        for (std::size_t rest = pos + 1; rest < chain.steps.size(); ++rest)
          w = apply_transform(w, chain.steps[rest]);
        NormalStatus fresh = normal_decompose(w);
        if (fresh.kind == NormalStatus::Kind::NotNormal) {
          std::ostringstream oss;
          oss << "critical variable of blow-up at position " << pos
              << " is not normal at the leaf";
          return fail(branch, oss.str());
        }
        report.ledger.push_back({pos, *critical_variable(step),
                                 {std::move(fresh), std::move(w)}});
      }
      for (const auto& stored : node.ledger) {
        auto it = std::find_if(report.ledger.begin(), report.ledger.end(),
                               [&](const LedgerEntry& e) {
                                 return e.chain_pos == stored.chain_pos;
                               });
        if (it == report.ledger.end())
          return fail(branch, "stored ledger entry refers to a non-blow-up position");
        if (it->critical_index != stored.critical_index ||
            !(it->status.snapshot == stored.status.snapshot) ||
            !status_equal(it->status.status, stored.status.status))
          return fail(branch, "stored ledger entry differs from recomputation");
      }
      reports.push_back(std::move(report));
      return true;
    }

    // Fork shape invariants.
    if (node.children.size() != 2)
      return fail(reports.size(), "fork does not have exactly two children");
    const auto& first = node.children[0].first;
    const auto& second = node.children[1].first;
    if (node.fork == ForkKind::Blowup) {
      if (first.kind != TransformKind::BlowupChartA ||
          second.kind != TransformKind::BlowupChartB || first.i != second.i ||
          first.j != second.j || first.param != second.param)
        return fail(reports.size(), "blow-up fork must consist of charts A and B");
    } else {
      if (first.kind != TransformKind::ReflectionPlus ||
          second.kind != TransformKind::ReflectionMinus || first.i != second.i)
        return fail(reports.size(), "reflection fork must consist of sigma+ and sigma-");
    }
    for (const auto& [t, child] : node.children) {
      if (!(t.target == node.sig))
        return fail(reports.size(), "child transform target differs from node signature");
      TransformChain extended = chain;
      extended.extend(t);
      if (!walk(*child, extended)) return false;
    }
    return true;
  }
};

} // namespace

VerifyOutcome verify_tree(const AdmissibleTree& tree,
                          const std::vector<GenSeries>& series) {
  VerifyOutcome outcome;
  for (const auto& f : series) {
    if (!(f.sig == tree.sig)) {
      outcome.failure = "series signature does not match the tree root";
      return outcome;
    }
  }
  Verifier verifier{series};
  if (verifier.walk(tree, TransformChain::identity(tree.sig))) {
    outcome.ok = true;
    outcome.reports = std::move(verifier.reports);
  } else {
    outcome.failure = std::move(verifier.failure);
    outcome.reports = std::move(verifier.reports);
  }
  return outcome;
}

} // namespace monolab
