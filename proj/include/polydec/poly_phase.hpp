#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydec/rational.hpp"

namespace polydec {

/// Polynomial phase with exact rational coefficients (ascending degree).
///
/// Every derivative is precomputed at construction, both exactly and as a
/// rounded double copy for fast Horner evaluation. Instances are immutable and
/// share their derivative table, so copies are cheap and thread-safe.
class PolyPhase {
 public:
  PolyPhase();
  explicit PolyPhase(std::vector<Rational> ascending);

  static PolyPhase monomial(int power, const Rational& coeff = Rational(1));

  int degree() const noexcept { return static_cast<int>(table_->exact.front().size()) - 1; }
  const std::vector<Rational>& coeffs() const noexcept { return table_->exact.front(); }

  /// Coefficients of the k-th derivative; empty-derivative orders return {0}.
  std::span<const Rational> exact_coeffs(int order) const;
  std::span<const double> approx_coeffs(int order) const;

  PolyPhase derivative(int order = 1) const;

  double eval(double s, int order = 0) const;
  Rational eval(const Rational& s, int order = 0) const;

  bool is_linear() const noexcept { return degree() <= 1; }
  bool is_zero() const noexcept { return degree() == 0 && coeffs().front() == 0; }

  /// s -> phi(offset + scale * s), exactly.
  PolyPhase compose_affine(const Rational& offset, const Rational& scale) const;

  PolyPhase scaled(const Rational& factor) const;
  /// phi(s) + slope * s + intercept.
  PolyPhase plus_linear(const Rational& slope, const Rational& intercept) const;

  PolyPhase operator+(const PolyPhase& other) const;
  PolyPhase operator-(const PolyPhase& other) const;

  /// "c0 + c1*s + c2*s^2" with rationals written as p/q; zero terms omitted.
  std::string to_string() const;

  friend bool operator==(const PolyPhase& a, const PolyPhase& b) {
    return a.coeffs() == b.coeffs();
  }

 private:
  struct Table {
    std::vector<std::vector<Rational>> exact;  // [order][power]
    std::vector<std::vector<double>> approx;
  };
  std::shared_ptr<const Table> table_;
};

/// Parses "c0 + c1*s + c2*s^2 + ..." (terms in any order, implicit '*'
/// allowed, coefficients as integers, p/q or decimals).
PolyPhase parse_phase(std::string_view text);

/// Horner evaluation of ascending double coefficients.
inline double horner(std::span<const double> c, double s) noexcept {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * s + c[i];
  return acc;
}

Rational horner(std::span<const Rational> c, const Rational& s);

}  // namespace polydec
