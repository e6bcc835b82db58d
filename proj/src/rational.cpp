#include "polydec/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "polydec/errors.hpp"

namespace polydec {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("empty integer in '" + std::string(whole) + "'");
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("bad digit in '" + std::string(whole) + "'");
  }
  // Strip leading zeros: the string constructor reads "0123" as octal.
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (text.empty()) throw ParseError("empty rational literal");

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
    text = trim(text);
  }

  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(text.substr(0, slash)), whole);
    const BigInt den = parse_integer(trim(text.substr(slash + 1)), whole);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    std::string_view mantissa = text;
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = text.substr(0, e);
      std::string_view exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      const BigInt ev = parse_integer(exp_text, whole);
      if (ev > 4000) throw ParseError("exponent too large in '" + std::string(whole) + "'");
      exponent = ev.convert_to<long>();
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char ch : mantissa) {
      if (ch == '.') {
        if (seen_point) throw ParseError("two decimal points in '" + std::string(whole) + "'");
        seen_point = true;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        digits.push_back(ch);
        if (seen_point) ++frac_digits;
      } else {
        throw ParseError("bad character in '" + std::string(whole) + "'");
      }
    }
    if (digits.empty()) throw ParseError("no digits in '" + std::string(whole) + "'");
    value = Rational(parse_integer(digits, whole));
    const long shift = exponent - frac_digits;
    value *= pow(Rational(10), shift);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw PreconditionViolated("non-finite double has no rational value");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an exact integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  return r * pow(Rational(2), exp - 53);
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw PreconditionViolated("zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result(1);
  Rational b = base;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  return result;
}

std::optional<Rational> exact_root(const Rational& q, unsigned n) {
  if (n == 0) return std::nullopt;
  if (n == 1) return q;
  if (q < 0 && n % 2 == 0) return std::nullopt;
  const bool negative = q < 0;
  const BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(q));
  const BigInt den = boost::multiprecision::denominator(q);
  auto int_root = [n](const BigInt& v) -> std::optional<BigInt> {
    BigInt r;
    const int exact = mpz_root(r.backend().data(), v.backend().data(), n);
    if (exact == 0) return std::nullopt;
    return r;
  };
  const auto rn = int_root(num);
  const auto rd = int_root(den);
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  return negative ? Rational(-root) : root;
}

}  // namespace polydec
