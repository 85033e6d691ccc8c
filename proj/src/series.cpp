#include "monolab/series.hpp"

#include "monolab/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace monolab {

GenSeries GenSeries::zero(const VariableSignature& sig) { return GenSeries(sig); }

GenSeries GenSeries::constant(const VariableSignature& sig, const Rational& c) {
  GenSeries out(sig);
  if (c != 0) out.terms.emplace(ExponentVector::zeros(sig.total()), c);
  return out;
}

GenSeries GenSeries::monomial(const VariableSignature& sig, const ExponentVector& e,
                              const Rational& c) {
  GenSeries out(sig);
  if (c != 0) {
    if (!e.is_valid_for(sig)) throw SignatureError("exponent not valid for signature");
    out.terms.emplace(e, c);
  }
  return out;
}

GenSeries GenSeries::coordinate(const VariableSignature& sig, std::size_t index) {
  if (index >= sig.total()) throw SignatureError("coordinate index out of range");
  ExponentVector e = ExponentVector::zeros(sig.total());
  e[index] = 1;
  return monomial(sig, e, Rational(1));
}

std::vector<ExponentVector> GenSeries::support() const {
  std::vector<ExponentVector> out;
  out.reserve(terms.size());
  for (const auto& [e, c] : terms) out.push_back(e);
  return out;
}

Rational GenSeries::coefficient(const ExponentVector& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? Rational(0) : it->second;
}

void GenSeries::accumulate(const ExponentVector& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

void GenSeries::validate() const {
  sig.validate();
  for (const auto& [e, c] : terms) {
    if (c == 0) throw std::logic_error("zero coefficient stored");
    if (!e.is_valid_for(sig))
      throw SignatureError("term exponent violates the mixed-series constraint");
  }
}

static void require_same_signature(const GenSeries& a, const GenSeries& b,
                                   const char* op) {
  if (!(a.sig == b.sig))
    throw SignatureError(std::string("signature mismatch in ") + op);
}

GenSeries operator+(const GenSeries& a, const GenSeries& b) {
  require_same_signature(a, b, "add");
  GenSeries out = a;
  for (const auto& [e, c] : b.terms) out.accumulate(e, c);
  return out;
}

GenSeries operator-(const GenSeries& a) {
  GenSeries out = a;
  for (auto& [e, c] : out.terms) c = -c;
  return out;
}

GenSeries operator-(const GenSeries& a, const GenSeries& b) { return a + (-b); }

GenSeries operator*(const GenSeries& a, const GenSeries& b) {
  require_same_signature(a, b, "mul");
  GenSeries out(a.sig);
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) out.accumulate(ea + eb, ca * cb);
  return out;
}

GenSeries operator*(const Rational& c, const GenSeries& a) {
  GenSeries out(a.sig);
  if (c == 0) return out;
  out.terms = a.terms;
  for (auto& [e, v] : out.terms) v *= c;
  return out;
}

GenSeries add(const GenSeries& a, const GenSeries& b) { return a + b; }
GenSeries mul(const GenSeries& a, const GenSeries& b) { return a * b; }

NormalStatus normal_decompose(const GenSeries& F) {
  NormalStatus status;
  if (F.is_zero()) {
    status.kind = NormalStatus::Kind::Zero;
    return status;
  }
  const auto mins = min_elements(F.support());
  if (mins.size() > 1) {
    status.kind = NormalStatus::Kind::NotNormal;
    status.witness = std::make_pair(mins[0], mins[1]);
    return status;
  }
  const ExponentVector& gamma = mins[0];
  GenSeries unit(F.sig);
  for (const auto& [e, c] : F.terms) unit.terms.emplace(e - gamma, c);
  status.kind = NormalStatus::Kind::Normal;
  status.decomposition = NormalDecomposition{gamma, std::move(unit)};
  return status;
}

std::optional<long> y_regularity_order(const GenSeries& F, std::size_t j) {
  if (j < F.sig.m || j >= F.sig.total())
    throw SignatureError("y_regularity_order: index is not a standard variable");
  std::optional<long> order;
  for (const auto& [e, c] : F.terms) {
    bool pure = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == j) continue;
      if (e[i] != 0) {
        pure = false;
        break;
      }
    }
    if (!pure) continue;
    const long deg = to_long(e[j]);
    if (!order || deg < *order) order = deg;
  }
  return order;
}

GenSeries log_derivative(const GenSeries& F, std::size_t i) {
  if (i >= F.sig.total()) throw SignatureError("log_derivative: index out of range");
  GenSeries out(F.sig);
  for (const auto& [e, c] : F.terms) {
    const Rational scaled = c * e[i];
    if (scaled != 0) out.terms.emplace(e, scaled);
  }
  return out;
}

GenSeries standard_derivative(const GenSeries& F, std::size_t j) {
  if (j < F.sig.m || j >= F.sig.total())
    throw SignatureError("standard_derivative: index is not a standard variable");
  GenSeries out(F.sig);
  for (const auto& [e, c] : F.terms) {
    if (e[j] == 0) continue;
    ExponentVector shifted = e;
    shifted[j] -= 1;
    out.accumulate(shifted, c * e[j]);
  }
  return out;
}

static double eval_impl(const GenSeries& F, const std::vector<double>& point,
                        bool check_radius) {
  if (point.size() != F.sig.total())
    throw SignatureError("eval_numeric: point dimension mismatch");
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (F.sig.is_generalized(i)) {
      if (point[i] < 0.0)
        throw std::domain_error("eval_numeric: negative generalized coordinate");
      if (check_radius && point[i] >= to_double(F.sig.polyradius[i]))
        throw std::domain_error("eval_numeric: point outside polydisk");
    } else if (check_radius &&
               std::abs(point[i]) >= to_double(F.sig.polyradius[i])) {
      throw std::domain_error("eval_numeric: point outside polydisk");
    }
  }
  double sum = 0.0;
  for (const auto& [e, c] : F.terms) {
    double term = to_double(c);
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (e[i] == 0) continue;
      if (is_integer(e[i])) {
        const long p = to_long(e[i]);
        term *= std::pow(point[i], static_cast<double>(p));
      } else {
        if (point[i] < 0.0)
          throw std::domain_error("eval_numeric: fractional power of a negative base");
        term *= std::pow(point[i], to_double(e[i]));
      }
    }
    sum += term;
  }
  return sum;
}

double eval_numeric(const GenSeries& F, const std::vector<double>& point) {
  return eval_impl(F, point, true);
}

double eval_numeric_unchecked(const GenSeries& F, const std::vector<double>& point) {
  return eval_impl(F, point, false);
}

} // namespace monolab
