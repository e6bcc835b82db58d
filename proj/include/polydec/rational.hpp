#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace polydec {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "p/q", integers, and decimal/scientific literals ("0.125", "-3e-4")
/// into an exact rational. Decimal input is taken at face value (0.1 == 1/10).
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact binary value of a finite double.
Rational from_double(double x);

Rational pow(const Rational& base, long exponent);

/// Exact n-th root when q is a perfect n-th power of a rational.
std::optional<Rational> exact_root(const Rational& q, unsigned n);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace polydec
