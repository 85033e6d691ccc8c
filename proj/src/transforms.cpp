#include "monolab/transforms.hpp"

#include "monolab/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace monolab {

namespace {

// Largest radius of the form min(cap, 1) / 2^t with c^p <= bound^q, i.e.
// c^(p/q) <= bound. Everything exact; the loop terminates since c -> 0.
Rational shrink_to_power_bound(const Rational& cap, long p, long q,
                               const Rational& bound) {
  Rational c = cap < 1 ? cap : Rational(1);
  const Rational rhs = pow_int(bound, q);
  while (pow_int(c, p) > rhs) c /= 2;
  return c;
}

void require_generalized(const VariableSignature& sig, std::size_t idx,
                         const char* what) {
  if (idx >= sig.m)
    throw SignatureError(std::string(what) + ": index must be a generalized variable");
}

std::pair<long, long> lambda_parts(const Rational& lambda) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  return {boost::multiprecision::numerator(lambda).convert_to<long>(),
          boost::multiprecision::denominator(lambda).convert_to<long>()};
}

} // namespace

ElementaryTransform ElementaryTransform::ramification(const VariableSignature& target,
                                                      std::size_t i,
                                                      const Rational& lambda) {
  target.validate();
  require_generalized(target, i, "ramification");
  auto [p, q] = lambda_parts(lambda);
  ElementaryTransform t;
  t.kind = TransformKind::Ramification;
  t.i = i;
  t.param = lambda;
  t.target = target;
  t.source = target;
  t.source.polyradius[i] = shrink_to_power_bound(target.polyradius[i], p, q,
                                                 target.polyradius[i]);
  return t;
}

ElementaryTransform ElementaryTransform::translation(const VariableSignature& target,
                                                     std::size_t j, const Rational& c) {
  target.validate();
  if (j < target.m || j >= target.total())
    throw SignatureError("translation: only standard variables admit translation");
  ElementaryTransform t;
  t.kind = TransformKind::Translation;
  t.i = j;
  t.param = c;
  t.target = target;
  t.source = target;
  const Rational abs_c = c < 0 ? Rational(-c) : c;
  if (abs_c >= target.polyradius[j])
    throw SignatureError("translation: |c| must be smaller than the radius");
  t.source.polyradius[j] = target.polyradius[j] - abs_c;
  return t;
}

ElementaryTransform ElementaryTransform::blowup_a(const VariableSignature& target,
                                                  std::size_t i, std::size_t j,
                                                  const Rational& lambda) {
  target.validate();
  require_generalized(target, i, "blowup");
  require_generalized(target, j, "blowup");
  if (i == j) throw SignatureError("blowup: indices must differ");
  auto [p, q] = lambda_parts(lambda);
  ElementaryTransform t;
  t.kind = TransformKind::BlowupChartA;
  t.i = i;
  t.j = j;
  t.param = lambda;
  t.target = target;
  t.source = target;
  // Fiber coordinate x'_j ranges over [0, 2); the base radius shrinks so that
  // (x'_i)^lambda * x'_j stays below the target radius of x_j.
  t.source.polyradius[j] = 2;
  t.source.polyradius[i] = shrink_to_power_bound(
      target.polyradius[i], p, q, target.polyradius[j] / 2);
  return t;
}

ElementaryTransform ElementaryTransform::blowup_b(const VariableSignature& target,
                                                  std::size_t i, std::size_t j,
                                                  const Rational& lambda) {
  target.validate();
  require_generalized(target, i, "blowup");
  require_generalized(target, j, "blowup");
  if (i == j) throw SignatureError("blowup: indices must differ");
  auto [p, q] = lambda_parts(lambda);
  ElementaryTransform t;
  t.kind = TransformKind::BlowupChartB;
  t.i = i;
  t.j = j;
  t.param = lambda;
  t.target = target;
  t.source = target;
  t.source.polyradius[i] = 2;
  t.source.polyradius[j] = shrink_to_power_bound(
      target.polyradius[j], q, p, target.polyradius[i] / 2);
  return t;
}

ElementaryTransform ElementaryTransform::reflection(const VariableSignature& target,
                                                    std::size_t standard_pos,
                                                    bool positive) {
  target.validate();
  if (standard_pos >= target.n)
    throw SignatureError("reflection: standard position out of range");
  ElementaryTransform t;
  t.kind = positive ? TransformKind::ReflectionPlus : TransformKind::ReflectionMinus;
  t.i = standard_pos;
  t.target = target;
  t.source.m = target.m + 1;
  t.source.n = target.n - 1;
  t.source.polyradius.assign(target.polyradius.begin(),
                             target.polyradius.begin() + target.m);
  t.source.polyradius.push_back(target.polyradius[target.m + standard_pos]);
  for (std::size_t pos = 0; pos < target.n; ++pos) {
    if (pos == standard_pos) continue;
    t.source.polyradius.push_back(target.polyradius[target.m + pos]);
  }
  return t;
}

ElementaryTransform ElementaryTransform::face_zero(const VariableSignature& target,
                                                   std::size_t i) {
  target.validate();
  if (i >= target.total()) throw SignatureError("face_zero: index out of range");
  ElementaryTransform t;
  t.kind = TransformKind::FaceZero;
  t.i = i;
  t.target = target;
  if (i < target.m) {
    t.source.m = target.m - 1;
    t.source.n = target.n;
  } else {
    t.source.m = target.m;
    t.source.n = target.n - 1;
  }
  for (std::size_t v = 0; v < target.total(); ++v)
    if (v != i) t.source.polyradius.push_back(target.polyradius[v]);
  return t;
}

void TransformChain::extend(const ElementaryTransform& t) {
  if (!(t.target == source_sig()))
    throw SignatureError("chain step does not compose with the current source");
  steps.push_back(t);
}

void TransformChain::validate() const {
  const VariableSignature* expect = &root_sig;
  for (const auto& step : steps) {
    if (!(step.target == *expect))
      throw SignatureError("chain has non-composable adjacent signatures");
    expect = &step.source;
  }
}

GenSeries apply_transform(const GenSeries& F, const ElementaryTransform& t) {
  if (!(F.sig == t.target))
    throw SignatureError("apply_transform: series signature must equal the target");
  GenSeries out(t.source);
  switch (t.kind) {
    case TransformKind::Ramification:
      for (const auto& [e, c] : F.terms) {
        ExponentVector img = e;
        img[t.i] = e[t.i] * t.param;
        out.accumulate(img, c);
      }
      break;
    case TransformKind::BlowupChartA:
      for (const auto& [e, c] : F.terms) {
        ExponentVector img = e;
        img[t.i] = e[t.i] + t.param * e[t.j];
        out.accumulate(img, c);
      }
      break;
    case TransformKind::BlowupChartB:
      for (const auto& [e, c] : F.terms) {
        ExponentVector img = e;
        img[t.j] = e[t.j] + e[t.i] / t.param;
        out.accumulate(img, c);
      }
      break;
    case TransformKind::ReflectionPlus:
    case TransformKind::ReflectionMinus: {
      const std::size_t m = t.target.m;
      const std::size_t abs_y = m + t.i;
      const bool negative = t.kind == TransformKind::ReflectionMinus;
      for (const auto& [e, c] : F.terms) {
        ExponentVector img = ExponentVector::zeros(t.source.total());
        for (std::size_t v = 0; v < m; ++v) img[v] = e[v];
        img[m] = e[abs_y];
        std::size_t cursor = m + 1;
        for (std::size_t pos = 0; pos < t.target.n; ++pos) {
          if (pos == t.i) continue;
          img[cursor++] = e[m + pos];
        }
        Rational coeff = c;
        if (negative && to_long(e[abs_y]) % 2 != 0) coeff = -coeff;
        out.accumulate(img, coeff);
      }
      break;
    }
    case TransformKind::Translation:
      for (const auto& [e, c] : F.terms) {
        const long b = to_long(e[t.i]);
        for (long kk = 0; kk <= b; ++kk) {
          ExponentVector img = e;
          img[t.i] = kk;
          out.accumulate(img, c * binomial_coefficient(b, kk) *
                                  pow_int(t.param, b - kk));
        }
      }
      break;
    case TransformKind::FaceZero:
      for (const auto& [e, c] : F.terms) {
        if (e[t.i] != 0) continue;
        ExponentVector img;
        img.entries.reserve(e.size() - 1);
        for (std::size_t v = 0; v < e.size(); ++v)
          if (v != t.i) img.entries.push_back(e[v]);
        out.accumulate(img, c);
      }
      break;
  }
  return out;
}

GenSeries apply_transform(const GenSeries& F, const TransformChain& chain) {
  if (!(F.sig == chain.target_sig()))
    throw SignatureError("apply_transform: series signature must equal the chain target");
  GenSeries cur = F;
  for (const auto& step : chain.steps) cur = apply_transform(cur, step);
  return cur;
}

std::optional<std::size_t> critical_variable(const ElementaryTransform& t) {
  switch (t.kind) {
    case TransformKind::BlowupChartA:
      return t.i;  // inverse divides by x_i^lambda
    case TransformKind::BlowupChartB:
      return t.j;  // inverse divides by x_j^(1/lambda)
    default:
      return std::nullopt;
  }
}

GenSeries critical_pullback(const ElementaryTransform& t) {
  const auto idx = critical_variable(t);
  if (!idx) throw std::invalid_argument("critical_pullback: not a blow-up chart");
  // x_i o nu = x'_i (chart A) and x_j o nu = x'_j (chart B).
  return GenSeries::coordinate(t.source, *idx);
}

namespace {

void check_in_polydisk(const VariableSignature& sig, const std::vector<double>& p) {
  if (p.size() != sig.total())
    throw SignatureError("map_point: dimension mismatch");
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double r = to_double(sig.polyradius[v]);
    if (sig.is_generalized(v)) {
      if (p[v] < 0.0 || p[v] >= r)
        throw std::domain_error("map_point: point outside source polydisk");
    } else if (std::abs(p[v]) >= r) {
      throw std::domain_error("map_point: point outside source polydisk");
    }
  }
}

} // namespace

std::vector<double> map_point(const ElementaryTransform& t,
                              const std::vector<double>& p) {
  check_in_polydisk(t.source, p);
  const double lam = to_double(t.param);
  std::vector<double> out;
  switch (t.kind) {
    case TransformKind::Ramification:
      out = p;
      out[t.i] = std::pow(p[t.i], lam);
      break;
    case TransformKind::BlowupChartA:
      out = p;
      out[t.j] = std::pow(p[t.i], lam) * p[t.j];
      break;
    case TransformKind::BlowupChartB:
      out = p;
      out[t.i] = p[t.i] * std::pow(p[t.j], 1.0 / lam);
      break;
    case TransformKind::ReflectionPlus:
    case TransformKind::ReflectionMinus: {
      const std::size_t m = t.target.m;
      out.assign(t.target.total(), 0.0);
      for (std::size_t v = 0; v < m; ++v) out[v] = p[v];
      const double sign = t.kind == TransformKind::ReflectionPlus ? 1.0 : -1.0;
      out[m + t.i] = sign * p[m];
      std::size_t cursor = m + 1;
      for (std::size_t pos = 0; pos < t.target.n; ++pos) {
        if (pos == t.i) continue;
        out[m + pos] = p[cursor++];
      }
      break;
    }
    case TransformKind::Translation:
      out = p;
      out[t.i] = p[t.i] + lam;
      break;
    case TransformKind::FaceZero:
      out.assign(t.target.total(), 0.0);
      for (std::size_t v = 0, cursor = 0; v < t.target.total(); ++v)
        out[v] = (v == t.i) ? 0.0 : p[cursor++];
      break;
  }
  return out;
}

std::vector<double> map_point(const TransformChain& chain,
                              const std::vector<double>& p) {
  std::vector<double> cur = p;
  for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it)
    cur = map_point(*it, cur);
  return cur;
}

std::optional<std::vector<double>> invert_point(const ElementaryTransform& t,
                                                const std::vector<double>& p,
                                                double zero_tol) {
  const double lam = to_double(t.param);
  std::vector<double> out;
  switch (t.kind) {
    case TransformKind::Ramification:
      out = p;
      out[t.i] = std::pow(p[t.i], 1.0 / lam);
      return out;
    case TransformKind::BlowupChartA: {
      if (std::abs(p[t.i]) <= zero_tol) return std::nullopt;  // critical locus
      out = p;
      out[t.j] = p[t.j] / std::pow(p[t.i], lam);
      return out;
    }
    case TransformKind::BlowupChartB: {
      if (std::abs(p[t.j]) <= zero_tol) return std::nullopt;
      out = p;
      out[t.i] = p[t.i] / std::pow(p[t.j], 1.0 / lam);
      return out;
    }
    case TransformKind::ReflectionPlus:
    case TransformKind::ReflectionMinus: {
      const std::size_t m = t.target.m;
      const double y = p[m + t.i];
      const bool plus = t.kind == TransformKind::ReflectionPlus;
      if (plus && y < -zero_tol) return std::nullopt;
      if (!plus && y > zero_tol) return std::nullopt;
      out.assign(t.source.total(), 0.0);
      for (std::size_t v = 0; v < m; ++v) out[v] = p[v];
      out[m] = plus ? std::max(y, 0.0) : std::max(-y, 0.0);
      std::size_t cursor = m + 1;
      for (std::size_t pos = 0; pos < t.target.n; ++pos) {
        if (pos == t.i) continue;
        out[cursor++] = p[m + pos];
      }
      return out;
    }
    case TransformKind::Translation:
      out = p;
      out[t.i] = p[t.i] - lam;
      return out;
    case TransformKind::FaceZero: {
      if (std::abs(p[t.i]) > zero_tol) return std::nullopt;
      out.clear();
      for (std::size_t v = 0; v < p.size(); ++v)
        if (v != t.i) out.push_back(p[v]);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<double>> invert_point(const TransformChain& chain,
                                                const std::vector<double>& p,
                                                double zero_tol) {
  std::vector<double> cur = p;
  for (const auto& step : chain.steps) {
    auto next = invert_point(step, cur, zero_tol);
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  return cur;
}

std::vector<double> Recentering::apply(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t v = 0; v < x.size(); ++v)
    out[v] = signs[v] * (x[v] - to_double(center[v]));
  return out;
}

std::vector<double> Recentering::apply_inverse(const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  for (std::size_t v = 0; v < x.size(); ++v)
    out[v] = signs[v] * x[v] + to_double(center[v]);
  return out;
}

Recentering recenter(const VariableSignature& sig, const std::vector<Rational>& a,
                     const std::vector<int>& signs) {
  if (a.size() != sig.total() || signs.size() != sig.total())
    throw SignatureError("recenter: dimension mismatch");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("recenter: signs must be +-1");
  Recentering rec;
  rec.center = a;
  rec.signs = signs;
  rec.standard_chain = TransformChain::identity(sig);
  for (std::size_t pos = 0; pos < sig.n; ++pos) {
    const std::size_t v = sig.m + pos;
    // Only the sigma = +1 translations are expressible in the catalog; everything
    // else stays pointwise (generalized variables have one-sided domains).
    if (signs[v] == 1 && a[v] != 0)
      rec.standard_chain.extend(ElementaryTransform::translation(
          rec.standard_chain.source_sig(), v, a[v]));
  }
  return rec;
}

} // namespace monolab
