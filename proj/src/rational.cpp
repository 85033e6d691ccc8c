#include "monolab/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <stdexcept>

namespace monolab {

namespace {

bool parse_integer(const std::string& text, BigInt& out) {
  if (text.empty()) return false;
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t pos = start; pos < text.size(); ++pos)
    if (text[pos] < '0' || text[pos] > '9') return false;
  out = BigInt(text);
  return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  BigInt num, den = 1;
  if (slash == std::string::npos) {
    if (!parse_integer(text, num))
      throw std::invalid_argument("malformed rational: '" + text + "'");
  } else {
    if (!parse_integer(text.substr(0, slash), num) ||
        !parse_integer(text.substr(slash + 1), den))
      throw std::invalid_argument("malformed rational: '" + text + "'");
    if (den <= 0)
      throw std::invalid_argument("rational denominator must be positive: '" + text + "'");
    if (boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den) != 1)
      throw std::invalid_argument("rational not in lowest terms: '" + text + "'");
  }
  Rational result(num, den);
  return result;
}

std::string format_rational(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

bool is_integer(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

long to_long(const Rational& value) {
  if (!is_integer(value)) throw std::invalid_argument("rational is not an integer");
  return boost::multiprecision::numerator(value).convert_to<long>();
}

Rational pow_int(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  if (exp < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return Rational(1) / pow_int(base, -exp);
  }
  Rational acc(1), cur = base;
  unsigned long e = static_cast<unsigned long>(exp);
  while (e > 0) {
    if (e & 1) acc *= cur;
    cur *= cur;
    e >>= 1;
  }
  return acc;
}

BigInt iroot_floor(const BigInt& value, unsigned degree) {
  if (value < 0) throw std::domain_error("iroot_floor of a negative value");
  if (degree == 0) throw std::invalid_argument("iroot_floor degree must be >= 1");
  if (value == 0 || value == 1 || degree == 1) return value;
  // Newton iteration from a power-of-two overestimate.
  const unsigned long bits = boost::multiprecision::msb(value) + 1;
  BigInt x = BigInt(1) << (bits / degree + 1);
  while (true) {
    BigInt xk = 1;
    for (unsigned t = 0; t + 1 < degree; ++t) xk *= x;
    BigInt next = ((degree - 1) * x + value / xk) / degree;
    if (next >= x) break;
    x = next;
  }
  while (true) {
    BigInt p = 1;
    for (unsigned t = 0; t < degree; ++t) p *= x;
    if (p <= value) break;
    --x;
  }
  return x;
}

Rational nth_root_upper(const Rational& value, unsigned degree, unsigned bits) {
  if (value < 0) throw std::domain_error("nth_root_upper of a negative value");
  if (degree == 0) throw std::invalid_argument("nth_root_upper degree must be >= 1");
  if (value == 0) return Rational(0);
  if (degree == 1) return value;
  const BigInt a = boost::multiprecision::numerator(value);
  const BigInt b = boost::multiprecision::denominator(value);
  // value^(1/N) = (a * b^(N-1))^(1/N) / b; scale by 2^(N*bits) and round the root up.
  BigInt scaled = a;
  for (unsigned t = 0; t + 1 < degree; ++t) scaled *= b;
  scaled <<= static_cast<unsigned long>(degree) * bits;
  BigInt root = iroot_floor(scaled, degree);
  BigInt check = 1;
  for (unsigned t = 0; t < degree; ++t) check *= root;
  if (check < scaled) ++root;
  return Rational(root, b << bits);
}

Rational binomial_coefficient(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  BigInt num = 1, den = 1;
  for (long t = 0; t < k; ++t) {
    num *= (n - t);
    den *= (t + 1);
  }
  return Rational(num, den);
}

int sign_of(const Rational& value) {
  if (value > 0) return 1;
  if (value < 0) return -1;
  return 0;
}

} // namespace monolab
