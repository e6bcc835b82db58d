#include "polydec/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydec/errors.hpp"
#include "polydec/poly_phase.hpp"

namespace polydec {

namespace {

std::vector<Rational> trim(std::vector<Rational> c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.empty()) c.emplace_back(0);
  return c;
}

}  // namespace

CertifiedPoly::CertifiedPoly(std::vector<Rational> exact) : exact_(trim(std::move(exact))) {
  approx_.resize(exact_.size());
  for (std::size_t i = 0; i < exact_.size(); ++i) approx_[i] = to_double(exact_[i]);
}

CertifiedPoly::CertifiedPoly(std::span<const Rational> exact)
    : CertifiedPoly(std::vector<Rational>(exact.begin(), exact.end())) {}

double CertifiedPoly::value(double x) const noexcept { return horner(approx_, x); }

int CertifiedPoly::sign(double x) const {
  constexpr double u = std::numeric_limits<double>::epsilon() * 0.5;
  double acc = 0.0;
  double magnitude = 0.0;
  const double ax = std::fabs(x);
  for (std::size_t i = approx_.size(); i-- > 0;) {
    acc = acc * x + approx_[i];
    magnitude = magnitude * ax + std::fabs(approx_[i]);
  }
  // gamma_{2n} for Horner plus one rounding per stored coefficient, padded.
  const double n = static_cast<double>(approx_.size());
  const double bound = (2.0 * n + 2.0) * 1.0625 * u * magnitude;
  if (std::fabs(acc) > bound) return acc > 0 ? 1 : -1;
  const Rational v = horner(std::span<const Rational>(exact_), from_double(x));
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

CertifiedPoly CertifiedPoly::derivative() const {
  if (exact_.size() <= 1) return CertifiedPoly(std::vector<Rational>{Rational(0)});
  std::vector<Rational> d(exact_.size() - 1);
  for (std::size_t k = 1; k < exact_.size(); ++k) d[k - 1] = exact_[k] * static_cast<long>(k);
  return CertifiedPoly(std::move(d));
}

std::vector<double> isolate_roots_on_pieces(const CertifiedPoly& p, double lo, double hi,
                                            std::span<const double> critical, double width) {
  if (!(lo <= hi)) throw PreconditionViolated("root isolation on reversed interval");
  std::vector<double> roots;
  if (p.is_zero() || p.degree() == 0) return roots;

  std::vector<double> pts;
  pts.reserve(critical.size() + 2);
  pts.push_back(lo);
  for (double c : critical) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);

  std::vector<int> signs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) signs[i] = p.sign(pts[i]);

  auto push = [&roots](double r) {
    if (roots.empty() || r > roots.back()) roots.push_back(r);
  };
  const auto f = [&p](double x) { return static_cast<double>(p.sign(x)); };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (signs[i] == 0) push(pts[i]);
    if (i + 1 < pts.size() && signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      push(bisect(f, pts[i], pts[i + 1], static_cast<double>(signs[i]), width));
    }
  }
  if (roots.size() > static_cast<std::size_t>(p.degree()))
    throw RootIsolationError("more roots than the degree allows", 0.0);
  return roots;
}

std::vector<double> isolate_roots(const CertifiedPoly& p, double lo, double hi, double width) {
  if (p.is_zero() || p.degree() == 0) return {};
  if (p.degree() == 1) {
    const int sl = p.sign(lo);
    const int sh = p.sign(hi);
    std::vector<double> roots;
    if (sl == 0) roots.push_back(lo);
    if (sl != 0 && sh != 0 && sl != sh) {
      const auto f = [&p](double x) { return static_cast<double>(p.sign(x)); };
      roots.push_back(bisect(f, lo, hi, static_cast<double>(sl), width));
    }
    if (sh == 0 && hi > lo) roots.push_back(hi);
    return roots;
  }
  const auto critical = isolate_roots(p.derivative(), lo, hi, 0.0);
  return isolate_roots_on_pieces(p, lo, hi, critical, width);
}

}  // namespace polydec
