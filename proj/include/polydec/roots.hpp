#pragma once

#include <span>
#include <vector>

#include "polydec/rational.hpp"

namespace polydec {

/// Polynomial with exact rational coefficients and a rounded double copy.
/// sign() is certified: a Horner running-error bound decides the sign in
/// double arithmetic, and the exact rational value is used only when the
/// bound cannot.
class CertifiedPoly {
 public:
  explicit CertifiedPoly(std::vector<Rational> exact);
  explicit CertifiedPoly(std::span<const Rational> exact);

  int degree() const noexcept { return static_cast<int>(approx_.size()) - 1; }
  bool is_zero() const noexcept { return approx_.size() == 1 && exact_.front() == 0; }
  double value(double x) const noexcept;
  int sign(double x) const;
  CertifiedPoly derivative() const;
  std::span<const double> approx() const noexcept { return approx_; }
  std::span<const Rational> exact() const noexcept { return exact_; }

 private:
  std::vector<Rational> exact_;
  std::vector<double> approx_;
};

/// Sign-changing real roots (and exact zeros) of p in [lo, hi], sorted.
/// Each root is bracketed by certified sign evaluation and bisected until the
/// bracket is at most `width` wide (0 bisects to adjacent doubles).
/// Roots of even multiplicity that do not hit a double exactly are not
/// reported; callers needing extrema only care about sign changes.
std::vector<double> isolate_roots(const CertifiedPoly& p, double lo, double hi, double width = 0.0);

/// Same, but with the sorted interior critical points of p already known
/// (p is monotone between consecutive breakpoints).
std::vector<double> isolate_roots_on_pieces(const CertifiedPoly& p, double lo, double hi,
                                            std::span<const double> critical, double width = 0.0);

/// Bisection on a bracketing pair for an arbitrary continuous function;
/// f(a) and f(b) must have opposite signs.
template <class F>
double bisect(F&& f, double a, double b, double fa, double width = 0.0) {
  for (int iter = 0; iter < 2100; ++iter) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b || (b - a) <= width) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace polydec
