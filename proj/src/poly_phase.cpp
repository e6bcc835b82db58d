#include "polydec/poly_phase.hpp"

#include <cctype>
#include <map>

#include "polydec/errors.hpp"

namespace polydec {

namespace {

std::vector<Rational> trimmed(std::vector<Rational> c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.empty()) c.emplace_back(0);
  return c;
}

std::vector<Rational> differentiate(const std::vector<Rational>& c) {
  if (c.size() <= 1) return {Rational(0)};
  std::vector<Rational> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<long>(k);
  return trimmed(std::move(d));
}

}  // namespace

Rational horner(std::span<const Rational> c, const Rational& s) {
  Rational acc(0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * s + c[i];
  return acc;
}

PolyPhase::PolyPhase() : PolyPhase(std::vector<Rational>{Rational(0)}) {}

PolyPhase::PolyPhase(std::vector<Rational> ascending) {
  auto table = std::make_shared<Table>();
  table->exact.push_back(trimmed(std::move(ascending)));
  // Orders 0..degree+1, so the last entry is the zero polynomial.
  const std::size_t deg = table->exact.front().size() - 1;
  for (std::size_t k = 0; k <= deg; ++k) table->exact.push_back(differentiate(table->exact.back()));
  for (const auto& c : table->exact) {
    std::vector<double> a(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) a[i] = to_double(c[i]);
    table->approx.push_back(std::move(a));
  }
  table_ = std::move(table);
}

PolyPhase PolyPhase::monomial(int power, const Rational& coeff) {
  if (power < 0) throw PreconditionViolated("negative monomial power");
  std::vector<Rational> c(static_cast<std::size_t>(power) + 1, Rational(0));
  c.back() = coeff;
  return PolyPhase(std::move(c));
}

std::span<const Rational> PolyPhase::exact_coeffs(int order) const {
  if (order < 0) throw PreconditionViolated("negative derivative order");
  const auto& e = table_->exact;
  return e[std::min<std::size_t>(static_cast<std::size_t>(order), e.size() - 1)];
}

std::span<const double> PolyPhase::approx_coeffs(int order) const {
  if (order < 0) throw PreconditionViolated("negative derivative order");
  const auto& a = table_->approx;
  return a[std::min<std::size_t>(static_cast<std::size_t>(order), a.size() - 1)];
}

PolyPhase PolyPhase::derivative(int order) const {
  const auto c = exact_coeffs(order);
  return PolyPhase(std::vector<Rational>(c.begin(), c.end()));
}

double PolyPhase::eval(double s, int order) const { return horner(approx_coeffs(order), s); }

Rational PolyPhase::eval(const Rational& s, int order) const {
  return horner(exact_coeffs(order), s);
}

PolyPhase PolyPhase::compose_affine(const Rational& offset, const Rational& scale) const {
  // Horner in the polynomial ring: acc = acc * (offset + scale*s) + c_i.
  const auto& c = coeffs();
  std::vector<Rational> acc{Rational(0)};
  for (std::size_t i = c.size(); i-- > 0;) {
    std::vector<Rational> next(acc.size() + 1, Rational(0));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k] * offset;
      next[k + 1] += acc[k] * scale;
    }
    next[0] += c[i];
    acc = trimmed(std::move(next));
  }
  return PolyPhase(std::move(acc));
}

PolyPhase PolyPhase::scaled(const Rational& factor) const {
  std::vector<Rational> c = coeffs();
  for (auto& v : c) v *= factor;
  return PolyPhase(std::move(c));
}

PolyPhase PolyPhase::plus_linear(const Rational& slope, const Rational& intercept) const {
  std::vector<Rational> c = coeffs();
  if (c.size() < 2) c.resize(2, Rational(0));
  c[0] += intercept;
  c[1] += slope;
  return PolyPhase(std::move(c));
}

PolyPhase PolyPhase::operator+(const PolyPhase& other) const {
  std::vector<Rational> c = coeffs();
  const auto& o = other.coeffs();
  if (c.size() < o.size()) c.resize(o.size(), Rational(0));
  for (std::size_t i = 0; i < o.size(); ++i) c[i] += o[i];
  return PolyPhase(std::move(c));
}

PolyPhase PolyPhase::operator-(const PolyPhase& other) const {
  return *this + other.scaled(Rational(-1));
}

std::string PolyPhase::to_string() const {
  const auto& c = coeffs();
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    Rational mag = abs(c[k]);
    const bool negative = c[k] < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (k == 0) {
      out += polydec::to_string(mag);
      continue;
    }
    if (mag != 1) out += polydec::to_string(mag) + "*";
    out += "s";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

PolyPhase parse_phase(std::string_view text) {
  std::string src;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) src.push_back(ch);
  }
  if (src.empty()) throw ParseError("empty phase literal");

  // Split into signed terms at top-level '+'/'-', skipping exponent signs
  // ("1e-3") and signs right after '^' or '(' .
  std::vector<std::string> terms;
  std::string current;
  int depth = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char ch = src[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    const bool sign = (ch == '+' || ch == '-');
    const char prev = i > 0 ? src[i - 1] : '\0';
    const bool exponent_sign =
        (prev == 'e' || prev == 'E') && i >= 2 && std::isdigit(static_cast<unsigned char>(src[i - 2]));
    if (sign && depth == 0 && i > 0 && prev != '^' && prev != '(' && prev != '*' && !exponent_sign) {
      terms.push_back(current);
      current.clear();
    }
    current.push_back(ch);
  }
  terms.push_back(current);

  std::map<int, Rational> acc;
  for (std::string term : terms) {
    if (term.empty()) throw ParseError("empty term in phase '" + std::string(text) + "'");
    bool negative = false;
    while (!term.empty() && (term.front() == '+' || term.front() == '-')) {
      if (term.front() == '-') negative = !negative;
      term.erase(term.begin());
    }
    if (term.empty()) throw ParseError("dangling sign in phase '" + std::string(text) + "'");

    int power = 0;
    std::string coeff_text = term;
    if (const auto spos = term.find('s'); spos != std::string::npos) {
      coeff_text = term.substr(0, spos);
      std::string tail = term.substr(spos + 1);
      power = 1;
      if (!tail.empty()) {
        if (tail.front() != '^') throw ParseError("expected '^' after 's' in '" + term + "'");
        tail.erase(tail.begin());
        if (!tail.empty() && tail.front() == '(' && tail.back() == ')') tail = tail.substr(1, tail.size() - 2);
        if (tail.empty()) throw ParseError("missing exponent in '" + term + "'");
        for (char ch : tail) {
          if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ParseError("non-integer exponent in '" + term + "'");
        }
        power = std::stoi(tail);
        if (power > 64) throw ParseError("degree above 64 in '" + term + "'");
      }
      if (!coeff_text.empty() && coeff_text.back() == '*') coeff_text.pop_back();
    }
    if (!coeff_text.empty() && coeff_text.front() == '(' && coeff_text.back() == ')')
      coeff_text = coeff_text.substr(1, coeff_text.size() - 2);
    else if (coeff_text.find('(') != std::string::npos || coeff_text.find(')') != std::string::npos)
      throw ParseError("unbalanced parentheses in '" + term + "'");
    Rational coeff = coeff_text.empty() ? Rational(1) : parse_rational(coeff_text);
    if (negative) coeff = -coeff;
    acc[power] += coeff;
  }

  std::vector<Rational> c(static_cast<std::size_t>(acc.rbegin()->first) + 1, Rational(0));
  for (const auto& [power, coeff] : acc) c[static_cast<std::size_t>(power)] = coeff;
  return PolyPhase(std::move(c));
}

}  // namespace polydec
