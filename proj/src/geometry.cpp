#include "monolab/geometry.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace monolab {

Quadrant Quadrant::open(const VariableSignature& sig) {
  Quadrant q;
  q.sig = sig;
  q.selectors.assign(sig.total(), Selector::Positive);
  return q;
}

std::size_t Quadrant::dimension() const {
  std::size_t dim = 0;
  for (const auto s : selectors)
    if (s != Selector::Zero) ++dim;
  return dim;
}

void Quadrant::validate() const {
  sig.validate();
  if (selectors.size() != sig.total())
    throw SignatureError("quadrant selector count does not match signature");
  for (std::size_t v = 0; v < selectors.size(); ++v)
    if (selectors[v] == Selector::Negative && sig.is_generalized(v))
      throw SignatureError("generalized variables cannot carry a Negative selector");
}

void BasicSetDescriptor::validate() const {
  sig.validate();
  if (!(f.sig == sig)) throw SignatureError("basic set: equation signature mismatch");
  for (const auto& g : gs)
    if (!(g.sig == sig)) throw SignatureError("basic set: inequality signature mismatch");
}

namespace {

// lcm of the exponent denominators within one exponent vector.
unsigned common_root_degree(const ExponentVector& e) {
  BigInt acc = 1;
  for (const auto& x : e.entries) {
    const BigInt d = boost::multiprecision::denominator(x);
    acc = acc / boost::multiprecision::gcd(acc, d) * d;
  }
  return acc.convert_to<unsigned>();
}

// Sound rational upper bound on r^gamma = prod r_v^{gamma_v}, entries >= 0.
Rational power_upper_bound(const std::vector<Rational>& r, const ExponentVector& gamma) {
  const unsigned N = common_root_degree(gamma);
  Rational t(1);
  for (std::size_t v = 0; v < r.size(); ++v) {
    if (gamma[v] == 0) continue;
    const Rational scaled = gamma[v] * N;  // integral by construction
    t *= pow_int(r[v], to_long(scaled));
  }
  if (N == 1) return t;
  return nth_root_upper(t, N);
}

} // namespace

bool radius_certified(const NormalDecomposition& nd, const std::vector<Rational>& radius) {
  const auto zero = ExponentVector::zeros(nd.unit.sig.total());
  const Rational c0 = nd.unit.coefficient(zero);
  if (c0 == 0) throw std::invalid_argument("unit has zero constant term");
  if (radius.size() != nd.unit.sig.total())
    throw SignatureError("radius dimension mismatch");
  Rational sum(0);
  const Rational abs_c0 = c0 < 0 ? Rational(-c0) : c0;
  for (const auto& [e, c] : nd.unit.terms) {
    if (e == zero) continue;
    const Rational abs_c = c < 0 ? Rational(-c) : c;
    sum += abs_c * power_upper_bound(radius, e);
    if (sum >= abs_c0) return false;
  }
  return sum < abs_c0;
}

std::vector<Rational> validity_radius(const NormalDecomposition& nd,
                                      const std::vector<Rational>& start) {
  std::vector<Rational> r = start;
  while (!radius_certified(nd, r))
    for (auto& x : r) x /= 2;
  return r;
}

int sign_on_quadrant(const NormalDecomposition& nd, const Quadrant& q) {
  q.validate();
  if (nd.unit.sig.total() != q.sig.total())
    throw SignatureError("sign_on_quadrant: dimension mismatch");
  const auto& gamma = nd.monomial_exponent;
  for (std::size_t v = 0; v < q.sig.total(); ++v)
    if (gamma[v] > 0 && q.selectors[v] == Selector::Zero) return 0;
  if (!radius_certified(nd, q.sig.polyradius))
    throw std::invalid_argument("sign_on_quadrant: quadrant radius not certified");
  const Rational c0 = nd.unit.coefficient(ExponentVector::zeros(q.sig.total()));
  int sign = sign_of(c0);
  for (std::size_t v = q.sig.m; v < q.sig.total(); ++v)
    if (q.selectors[v] == Selector::Negative && to_long(gamma[v]) % 2 != 0) sign = -sign;
  return sign;
}

// ---------------------------------------------------------------------------
// Local parametrization builder
// ---------------------------------------------------------------------------

namespace {

GenSeries pull(const GenSeries& f, const ElementaryTransform& t) {
  return apply_transform(f, t);
}

std::vector<GenSeries> pull_all(const std::vector<GenSeries>& fs,
                                const ElementaryTransform& t) {
  std::vector<GenSeries> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(pull(f, t));
  return out;
}

// Restriction of a leaf-space series to the quadrant: variables with a Zero
// selector are faced out (descending index keeps indices stable). The result
// lives on the active variables only.
GenSeries restrict_to_quadrant(GenSeries f, const std::vector<Selector>& selectors) {
  for (std::size_t v = selectors.size(); v-- > 0;) {
    if (selectors[v] == Selector::Zero)
      f = apply_transform(f, ElementaryTransform::face_zero(f.sig, v));
  }
  return f;
}

struct CertifiedSigns {
  std::vector<Rational> radius;  // certified radius, full leaf dimension
  std::vector<int> signs;
};

// Constant sign of every compat restriction on the quadrant, with one shared
// certified radius found by scaling the chart's base radius.
std::optional<CertifiedSigns> certify_chart(const VariableSignature& leaf_sig,
                                            const std::vector<Selector>& selectors,
                                            const std::vector<GenSeries>& compat_leaf,
                                            unsigned scale_bits) {
  std::vector<NormalDecomposition> decomps;
  std::vector<int> base_sign(compat_leaf.size(), 0);
  std::vector<std::size_t> active;
  for (std::size_t v = 0; v < selectors.size(); ++v)
    if (selectors[v] != Selector::Zero) active.push_back(v);

  for (std::size_t s = 0; s < compat_leaf.size(); ++s) {
    GenSeries restricted = restrict_to_quadrant(compat_leaf[s], selectors);
    auto st = normal_decompose(restricted);
    if (st.kind == NormalStatus::Kind::NotNormal) return std::nullopt;
    if (st.is_zero()) {
      base_sign[s] = 0;
    } else {
      // Post-reflection charts are purely generalized with Positive selectors,
      // so the sign is the sign of the unit's constant term.
      base_sign[s] = sign_of(st.decomposition->unit.coefficient(
          ExponentVector::zeros(restricted.sig.total())));
      decomps.push_back(std::move(*st.decomposition));
    }
  }

  std::vector<Rational> base_active;
  for (auto v : active) base_active.push_back(leaf_sig.polyradius[v]);
  auto certified = [&](const Rational& theta) {
    std::vector<Rational> r = base_active;
    for (auto& x : r) x *= theta;
    for (const auto& nd : decomps)
      if (!radius_certified(nd, r)) return false;
    return true;
  };

  Rational theta(1);
  if (!certified(theta)) {
    const std::uint64_t denom = std::uint64_t(1) << scale_bits;
    std::uint64_t lo = 0, hi = denom;
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (certified(Rational(mid, denom)))
        lo = mid;
      else
        hi = mid;
    }
    if (lo >= 1) {
      theta = Rational(lo, denom);
    } else {
      theta = Rational(1, denom);
      while (!certified(theta)) theta /= 2;
    }
  }

  CertifiedSigns out;
  out.radius = leaf_sig.polyradius;
  for (auto& x : out.radius) x *= theta;
  out.signs = std::move(base_sign);
  return out;
}

struct Builder {
  ParamOptions opt;
  std::vector<ParamChart> out;

  void leaf_quadrants(const TransformChain& chain,
                      const std::vector<GenSeries>& compat_here) {
    const VariableSignature sig = chain.source_sig();
    if (sig.n > 0) {
      // The paper-side convention: reflect remaining standard variables so every
      // chart is defined on a purely generalized polydisk.
      for (bool positive : {true, false}) {
        auto t = ElementaryTransform::reflection(sig, 0, positive);
        TransformChain extended = chain;
        extended.extend(t);
        leaf_quadrants(extended, pull_all(compat_here, t));
      }
      return;
    }
    const std::size_t m = sig.m;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
      Quadrant q;
      q.sig = sig;
      q.selectors.assign(m, Selector::Zero);
      for (std::size_t v = 0; v < m; ++v)
        if (mask & (std::uint64_t(1) << v)) q.selectors[v] = Selector::Positive;
      Chart chart{chain, q};
      if (!certify_injective(chart)) continue;
      auto cert = certify_chart(sig, q.selectors, compat_here, opt.scale_bits);
      if (!cert) continue;
      chart.domain.sig.polyradius = std::move(cert->radius);
      out.push_back(ParamChart{std::move(chart), std::move(cert->signs)});
    }
  }

  void walk(const AdmissibleTree& node, const TransformChain& chain,
            const std::vector<GenSeries>& compat_here) {
    if (node.leaf) {
      leaf_quadrants(chain, compat_here);
      return;
    }
    for (const auto& [t, child] : node.children) {
      TransformChain extended = chain;
      extended.extend(t);
      walk(*child, extended, pull_all(compat_here, t));
    }
    if (node.fork == ForkKind::Blowup) stratum(node, chain, compat_here);
  }

  // Charts for the stratum where both blown-up variables vanish: recurse on the
  // polydisk with the two variables removed and lift the result back.
  void stratum(const AdmissibleTree& node, const TransformChain& chain,
               const std::vector<GenSeries>& compat_here) {
    const std::size_t p1 = std::min(node.children[0].first.i, node.children[0].first.j);
    const std::size_t p2 = std::max(node.children[0].first.i, node.children[0].first.j);
    const VariableSignature& sig = node.sig;

    auto face2 = ElementaryTransform::face_zero(sig, p2);
    auto face1 = ElementaryTransform::face_zero(face2.source, p1);
    std::vector<GenSeries> faced;
    faced.reserve(compat_here.size());
    for (const auto& f : compat_here) faced.push_back(pull(pull(f, face2), face1));

    Builder sub{opt};
    sub.build(face1.source, faced);

    for (auto& pc : sub.out) {
      auto lifted = lift_chart(pc.chart, sig, {p1, p2});
      TransformChain full = chain;
      for (const auto& step : lifted.chain.steps) full.extend(step);
      Chart chart{std::move(full), std::move(lifted.domain)};
      if (!certify_injective(chart)) continue;
      out.push_back(ParamChart{std::move(chart), std::move(pc.signs)});
    }
  }

  void build(const VariableSignature& target, const std::vector<GenSeries>& compat) {
    if (compat.empty()) {
      leaf_quadrants(TransformChain::identity(target), compat);
      return;
    }
    AdmissibleTree tree = star_monomialize(compat, opt.max_depth);
    walk(tree, TransformChain::identity(target), compat);
  }
};

} // namespace

Chart lift_chart(const Chart& reduced, const VariableSignature& full_root,
                 const std::vector<std::size_t>& inserted_positions) {
  auto lift_index = [&](std::size_t idx) {
    std::size_t full = idx;
    for (const std::size_t p : inserted_positions)
      if (p <= full) ++full;
    return full;
  };
  Chart out;
  out.chain = TransformChain::identity(full_root);
  for (const auto& step : reduced.chain.steps) {
    const VariableSignature& target = out.chain.source_sig();
    switch (step.kind) {
      case TransformKind::Ramification:
        out.chain.extend(
            ElementaryTransform::ramification(target, lift_index(step.i), step.param));
        break;
      case TransformKind::BlowupChartA:
        out.chain.extend(ElementaryTransform::blowup_a(target, lift_index(step.i),
                                                       lift_index(step.j), step.param));
        break;
      case TransformKind::BlowupChartB:
        out.chain.extend(ElementaryTransform::blowup_b(target, lift_index(step.i),
                                                       lift_index(step.j), step.param));
        break;
      case TransformKind::ReflectionPlus:
      case TransformKind::ReflectionMinus:
        out.chain.extend(ElementaryTransform::reflection(
            target, step.i, step.kind == TransformKind::ReflectionPlus));
        break;
      default:
        throw std::logic_error("unexpected transform inside a parametrization chain");
    }
  }
  const VariableSignature leaf_sig = out.chain.source_sig();
  out.domain.sig = leaf_sig;
  std::vector<Rational> radius(leaf_sig.total());
  std::vector<Selector> selectors(leaf_sig.total(), Selector::Positive);
  std::vector<bool> is_rider(leaf_sig.total(), false);
  for (const std::size_t p : inserted_positions) is_rider[p] = true;
  for (std::size_t v = 0, reduced_v = 0; v < leaf_sig.total(); ++v) {
    if (is_rider[v]) {
      selectors[v] = Selector::Zero;
      radius[v] = leaf_sig.polyradius[v];
    } else {
      selectors[v] = reduced.domain.selectors[reduced_v];
      radius[v] = reduced.domain.sig.polyradius[reduced_v];
      ++reduced_v;
    }
  }
  out.domain.selectors = std::move(selectors);
  out.domain.sig.polyradius = std::move(radius);
  return out;
}

bool certify_injective(const Chart& chart) {
  const auto& steps = chart.chain.steps;
  for (std::size_t pos = 0; pos < steps.size(); ++pos) {
    if (!steps[pos].is_blowup()) continue;
    GenSeries w = critical_pullback(steps[pos]);
    for (std::size_t rest = pos + 1; rest < steps.size(); ++rest)
      w = apply_transform(w, steps[rest]);
    // w is a coordinate monomial; it vanishes on the quadrant iff some variable
    // with positive exponent carries the Zero selector.
    for (const auto& [e, c] : w.terms) {
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] > 0 && chart.domain.selectors[v] == Selector::Zero) return false;
    }
  }
  return true;
}

std::vector<ParamChart> build_local_parametrization(const VariableSignature& target,
                                                    const std::vector<GenSeries>& compat,
                                                    const ParamOptions& opt) {
  target.validate();
  VariableSignature scaled = target;
  for (auto& r : scaled.polyradius) r *= opt.radius_scale;
  std::vector<GenSeries> compat_scaled;
  compat_scaled.reserve(compat.size());
  for (const auto& f : compat) {
    if (!f.sig.same_layout(target))
      throw SignatureError("compat function signature does not match the target");
    GenSeries g = f;
    g.sig = scaled;
    compat_scaled.push_back(std::move(g));
  }
  Builder builder{opt};
  builder.build(scaled, compat_scaled);
  return std::move(builder.out);
}

std::vector<ParamChart> build_local_parametrization(const BasicSetDescriptor& target,
                                                    const std::vector<GenSeries>& compat,
                                                    const ParamOptions& opt) {
  target.validate();
  std::vector<GenSeries> full;
  full.push_back(target.f);
  for (const auto& g : target.gs) full.push_back(g);
  for (const auto& f : compat) full.push_back(f);
  auto charts = build_local_parametrization(target.sig, full, opt);

  std::vector<ParamChart> retained;
  for (auto& pc : charts) {
    if (pc.signs[0] != 0) continue;
    bool keep = true;
    for (std::size_t g = 0; g < target.gs.size(); ++g)
      if (pc.signs[1 + g] != 1) keep = false;
    if (!keep) continue;
    std::vector<int> user_signs(pc.signs.begin() + 1 + target.gs.size(), pc.signs.end());
    retained.push_back(ParamChart{std::move(pc.chart), std::move(user_signs)});
  }
  return retained;
}

std::optional<std::vector<double>> invert_chart(const Chart& chart,
                                                const std::vector<double>& target_point,
                                                double zero_tol) {
  auto src = invert_point(chart.chain, target_point, zero_tol);
  if (!src) return std::nullopt;
  const auto& sig = chart.domain.sig;
  for (std::size_t v = 0; v < sig.total(); ++v) {
    const double x = (*src)[v];
    const double r = to_double(sig.polyradius[v]);
    switch (chart.domain.selectors[v]) {
      case Selector::Zero:
        if (std::abs(x) > zero_tol) return std::nullopt;
        break;
      case Selector::Positive:
        if (!(x > 0.0 && x < r)) return std::nullopt;
        break;
      case Selector::Negative:
        if (!(x < 0.0 && x > -r)) return std::nullopt;
        break;
    }
  }
  return src;
}

namespace {

// splitmix64, the one deterministic sampler used by every seeded report.
struct Splitmix {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
};

// Supremum of |coordinate pullback| over the certified domain box. Chains built
// from the catalog send coordinates to +- monomials, so the bound is the value
// at the box corner.
double image_sup(const Chart& chart, std::size_t coordinate) {
  GenSeries pulled = GenSeries::coordinate(chart.chain.target_sig(), coordinate);
  pulled = apply_transform(pulled, chart.chain);
  double sup = 0.0;
  for (const auto& [e, c] : pulled.terms) {
    double corner = std::abs(to_double(c));
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (chart.domain.selectors[v] == Selector::Zero) {
        corner = 0.0;
        break;
      }
      corner *= std::pow(to_double(chart.domain.sig.polyradius[v]), to_double(e[v]));
    }
    sup += corner;
  }
  return sup;
}

} // namespace

CoveringReport covering_check(const std::vector<ParamChart>& charts,
                              const VariableSignature& target, std::size_t samples,
                              std::uint64_t seed,
                              const std::function<bool(const std::vector<double>&)>*
                                  member) {
  CoveringReport report;
  if (charts.empty()) return report;

  // Sample inside the joint certified image of the top-dimensional charts; lower
  // strata only cover measure-zero sets.
  std::size_t max_dim = 0;
  for (const auto& pc : charts)
    max_dim = std::max(max_dim, pc.chart.domain.dimension());
  std::vector<double> radius(target.total(),
                             std::numeric_limits<double>::infinity());
  for (const auto& pc : charts) {
    if (pc.chart.domain.dimension() != max_dim) continue;
    for (std::size_t v = 0; v < target.total(); ++v)
      radius[v] = std::min(radius[v], image_sup(pc.chart, v));
  }
  for (std::size_t v = 0; v < target.total(); ++v)
    radius[v] = std::min(radius[v], 0.999 * to_double(target.polyradius[v]));
  report.sample_radius = radius;

  Splitmix rng{seed};
  std::size_t drawn = 0;
  const std::size_t budget_cap = samples * 1000;
  std::size_t attempts = 0;
  while (drawn < samples && attempts < budget_cap) {
    ++attempts;
    std::vector<double> p(target.total());
    for (std::size_t v = 0; v < target.total(); ++v) {
      const double u = rng.uniform();
      p[v] = target.is_generalized(v) ? u * radius[v] : (2.0 * u - 1.0) * radius[v];
    }
    if (member && !(*member)(p)) continue;
    ++drawn;
    bool hit = false;
    for (const auto& pc : charts)
      if (invert_chart(pc.chart, p).has_value()) {
        hit = true;
        break;
      }
    if (hit) ++report.covered;
  }
  report.samples = drawn;
  report.fraction = drawn == 0 ? 0.0 : static_cast<double>(report.covered) / drawn;
  return report;
}

SignCheckReport sign_constancy_check(const ParamChart& pc,
                                     const std::vector<GenSeries>& compat,
                                     std::size_t samples, std::uint64_t seed,
                                     double strict_margin, double zero_tol) {
  SignCheckReport report;
  Splitmix rng{seed};
  const auto& dom = pc.chart.domain;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> x(dom.sig.total(), 0.0);
    for (std::size_t v = 0; v < dom.sig.total(); ++v) {
      const double r = to_double(dom.sig.polyradius[v]);
      const double u = 0.1 + 0.8 * rng.uniform();  // interior band
      switch (dom.selectors[v]) {
        case Selector::Zero: x[v] = 0.0; break;
        case Selector::Positive: x[v] = u * r; break;
        case Selector::Negative: x[v] = -u * r; break;
      }
    }
    const std::vector<double> y = map_point(pc.chart.chain, x);
    for (std::size_t f = 0; f < compat.size(); ++f) {
      const double value = eval_numeric_unchecked(compat[f], y);
      const int expected = pc.signs[f];
      bool ok = true;
      if (expected == 0) {
        ok = std::abs(value) <= zero_tol;
      } else {
        ok = std::abs(value) > strict_margin &&
             ((value > 0) ? 1 : -1) == expected;
      }
      ++report.checked;
      if (!ok) {
        report.ok = false;
        report.failure = "sign mismatch for function " + std::to_string(f) +
                         ": expected " + std::to_string(expected) + ", value " +
                         std::to_string(value);
        return report;
      }
    }
  }
  return report;
}

} // namespace monolab
