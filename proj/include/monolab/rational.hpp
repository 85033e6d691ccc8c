#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace monolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p" or "p/q" with q > 0 and gcd(p, q) = 1. Throws std::invalid_argument
/// on anything else, including non-reduced fractions (the file formats are bit-exact).
Rational parse_rational(const std::string& text);

/// Inverse of parse_rational: "p" when the denominator is 1, "p/q" otherwise.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

bool is_integer(const Rational& value);

/// Requires is_integer(value) and a result that fits in long.
long to_long(const Rational& value);

/// base^exp with integer exp (negative allowed for nonzero base); exact.
Rational pow_int(const Rational& base, long exp);

/// floor(value^(1/degree)) for value >= 0, degree >= 1.
BigInt iroot_floor(const BigInt& value, unsigned degree);

/// Rational upper bound on value^(1/degree), within relative error ~2^-bits.
/// value must be >= 0.
Rational nth_root_upper(const Rational& value, unsigned degree, unsigned bits = 32);

Rational binomial_coefficient(long n, long k);

int sign_of(const Rational& value);

} // namespace monolab
