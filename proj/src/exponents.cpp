#include "monolab/exponents.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <set>

namespace monolab {

void VariableSignature::validate() const {
  if (polyradius.size() != m + n)
    throw SignatureError("polyradius length does not match m+n");
  for (const auto& r : polyradius)
    if (r <= 0) throw SignatureError("polyradius entries must be positive");
}

ExponentVector ExponentVector::zeros(std::size_t size) {
  ExponentVector v;
  v.entries.assign(size, Rational(0));
  return v;
}

bool ExponentVector::is_zero() const {
  for (const auto& e : entries)
    if (e != 0) return false;
  return true;
}

bool ExponentVector::is_valid_for(const VariableSignature& sig) const {
  if (entries.size() != sig.total()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 0) return false;
    if (i >= sig.m && !is_integer(entries[i])) return false;
  }
  return true;
}

bool ExponentVector::operator<(const ExponentVector& other) const {
  return std::lexicographical_compare(entries.begin(), entries.end(),
                                      other.entries.begin(), other.entries.end());
}

ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw SignatureError("exponent length mismatch in +");
  ExponentVector out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.entries[i] += b.entries[i];
  return out;
}

ExponentVector operator-(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw SignatureError("exponent length mismatch in -");
  ExponentVector out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.entries[i] -= b.entries[i];
  return out;
}

bool dominates(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw SignatureError("exponent length mismatch in dominates");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.entries[i] > b.entries[i]) return false;
  return true;
}

bool comparable(const ExponentVector& a, const ExponentVector& b) {
  return dominates(a, b) || dominates(b, a);
}

std::vector<ExponentVector> min_elements(const std::vector<ExponentVector>& S) {
  std::set<ExponentVector> unique(S.begin(), S.end());
  std::vector<ExponentVector> out;
  for (const auto& candidate : unique) {
    bool minimal = true;
    for (const auto& other : unique) {
      if (other == candidate) continue;
      if (dominates(other, candidate)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(candidate);
  }
  return out;  // set iteration is already canonical order
}

std::vector<std::pair<ExponentVector, ExponentVector>>
incomparable_pairs(const std::vector<ExponentVector>& S) {
  std::set<ExponentVector> unique(S.begin(), S.end());
  std::vector<ExponentVector> sorted(unique.begin(), unique.end());
  std::vector<std::pair<ExponentVector, ExponentVector>> out;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j)
      if (!comparable(sorted[i], sorted[j])) out.emplace_back(sorted[i], sorted[j]);
  return out;
}

} // namespace monolab
