#include "polydec/phase_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "polydec/errors.hpp"
#include "polydec/markov_table.hpp"
#include "polydec/rng.hpp"
#include "polydec/roots.hpp"

namespace polydec {

DerivativeRoots::DerivativeRoots(PolyPhase phase, Interval domain)
    : phase_(std::move(phase)), domain_(domain) {
  const int deg = phase_.degree();
  roots_.assign(static_cast<std::size_t>(deg) + 2, {});
  // phi^(deg) is constant: no roots. Walk down.
  for (int k = deg - 1; k >= 0; --k) {
    CertifiedPoly p(phase_.exact_coeffs(k));
    roots_[k] = isolate_roots_on_pieces(p, domain_.lo, domain_.hi, roots_[k + 1]);
  }
}

std::span<const double> DerivativeRoots::roots(int order) const {
  if (order < 0) throw PreconditionViolated("negative derivative order");
  if (static_cast<std::size_t>(order) >= roots_.size()) return {};
  return roots_[order];
}

std::vector<double> DerivativeRoots::roots_in(int order, const Interval& I) const {
  const auto all = roots(order);
  std::vector<double> out;
  auto it = std::upper_bound(all.begin(), all.end(), I.lo);
  for (; it != all.end() && *it < I.hi; ++it) out.push_back(*it);
  return out;
}

double eval_deriv(const PolyPhase& phase, double s, int order) {
  if (order < 0) throw PreconditionViolated("negative derivative order");
  return phase.eval(s, order);
}

SupResult sup_abs_deriv(const DerivativeRoots& cache, const Interval& I, int order) {
  if (!cache.domain().contains(I)) throw PreconditionViolated("interval outside cached domain");
  const auto& phi = cache.phase();
  SupResult best{std::fabs(phi.eval(I.lo, order)), I.lo};
  auto consider = [&](double s) {
    const double v = std::fabs(phi.eval(s, order));
    if (v > best.value) best = {v, s};
  };
  for (double s : cache.roots_in(order + 1, I)) consider(s);
  consider(I.hi);
  return best;
}

SupResult sup_abs_deriv(const PolyPhase& phase, const Interval& I, int order) {
  if (order < 0) throw PreconditionViolated("negative derivative order");
  if (order > phase.degree()) return {0.0, I.lo};
  // Only the orders above `order` are needed.
  const PolyPhase top = phase.derivative(order);
  const DerivativeRoots cache(top, I);
  return sup_abs_deriv(cache, I, 0);
}

void DdParams::validate() const {
  if (d < 1) throw PreconditionViolated("d must be >= 1");
  if (!(C_d > 1.0)) throw PreconditionViolated("C_d must exceed 1");
  const double cap = std::pow(C_d, -static_cast<double>(d));
  if (!(sigma > 0.0 && sigma < cap))
    throw PreconditionViolated("sigma must lie in (0, C_d^-d)");
}

double BadSet::measure() const noexcept {
  double m = 0.0;
  for (const auto& c : components) m += c.length();
  return m;
}

BadSet bad_set(const PolyPhase& phase, const Interval& J, const DdParams& params,
               double root_width) {
  params.validate();
  BadSet out;
  out.parent = J;
  if (phase.is_linear() || J.empty()) return out;
  if (root_width < 0.0) root_width = 1e-12 * J.length();

  const PolyPhase q = phase.derivative(2);
  const DerivativeRoots cache(q, J);
  const double s2 = sup_abs_deriv(cache, J, 0).value;
  const double s3 = sup_abs_deriv(cache, J, 1).value;
  out.threshold = params.sigma * (s2 + J.length() * s3);
  if (!(out.threshold > 0.0)) return out;

  const Rational T = from_double(out.threshold);
  std::vector<Rational> lower(q.coeffs().begin(), q.coeffs().end());
  std::vector<Rational> upper = lower;
  lower[0] -= T;
  upper[0] += T;
  const auto crit = cache.roots(1);
  std::vector<double> pts{J.lo, J.hi};
  for (const auto* poly : {&lower, &upper}) {
    const auto r = isolate_roots_on_pieces(CertifiedPoly(*poly), J.lo, J.hi, crit, root_width);
    pts.insert(pts.end(), r.begin(), r.end());
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const bool inside = std::fabs(q.eval(0.5 * (a + b))) < out.threshold;
    if (!inside) continue;
    if (!out.components.empty() && out.components.back().hi == a) {
      out.components.back().hi = b;
    } else {
      out.components.emplace_back(a, b);
    }
  }
  return out;
}

MembershipReport check_Dd_membership(const PolyPhase& phase, const DdParams& params,
                                     std::span<const double> sample_sigmas,
                                     std::span<const Interval> sample_intervals) {
  MembershipReport rep;
  auto run = [&](double sigma, const Interval& J) {
    DdParams p = params;
    p.sigma = sigma;
    const BadSet b = bad_set(phase, J, p);
    const double scale = std::pow(sigma, 1.0 / params.d) * J.length();
    const double m = b.measure();
    const double bound = params.C_d * scale;
    ++rep.checked;
    rep.max_components = std::max(rep.max_components, b.components.size());
    if (scale > 0.0) rep.max_measure_ratio = std::max(rep.max_measure_ratio, m / scale);
    if (static_cast<double>(b.components.size()) > params.C_d || m > bound) {
      rep.violations.push_back({sigma, J, b.components.size(), m, bound});
    }
  };
  if (sample_sigmas.size() == sample_intervals.size()) {
    for (std::size_t i = 0; i < sample_sigmas.size(); ++i) run(sample_sigmas[i], sample_intervals[i]);
  } else {
    for (double s : sample_sigmas)
      for (const auto& J : sample_intervals) run(s, J);
  }
  return rep;
}

double analytic_Cd(int d) {
  if (d < 1) throw PreconditionViolated("d must be >= 1");
  double c = 0.0;
  for (int n = 1; n <= d; ++n) {
    const double m = 4.0 * std::pow(1.0 + 2.0 * n * n, 1.0 / n);
    c = std::max({c, m, static_cast<double>(n + 1)});
  }
  return c;
}

namespace {

PolyPhase random_phase_with_phi2_degree(Rng& rng, int n) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 3, Rational(0));
  for (auto& x : c) x = Rational(rng.uniform_int(-1024, 1024), 1024);
  if (c.back() == 0) c.back() = Rational(1, 1024);
  return PolyPhase(std::move(c));
}

}  // namespace

CdCalibration calibrate_Cd(int d, std::size_t phases, std::size_t pairs_per_phase,
                           std::uint64_t seed) {
  CdCalibration cal;
  cal.d = d;
  cal.analytic = analytic_Cd(d);
  const double cap = std::pow(cal.analytic, -static_cast<double>(d));
  DdParams params{d, cal.analytic, 0.5 * cap};
  for (std::size_t i = 0; i < phases; ++i) {
    Rng rng(derive_seed(seed, i));
    const int n = static_cast<int>(rng.uniform_int(0, d));
    const PolyPhase phi = random_phase_with_phi2_degree(rng, n);
    std::vector<double> sigmas;
    std::vector<Interval> Js;
    for (std::size_t k = 0; k < pairs_per_phase; ++k) {
      sigmas.push_back(cap * std::exp(-12.0 * rng.uniform()) * (1.0 - 1e-9));
      double a = rng.uniform();
      double b = rng.uniform();
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6) b = std::min(1.0, a + 1e-6);
      Js.emplace_back(a, b);
    }
    const auto rep = check_Dd_membership(phi, params, sigmas, Js);
    cal.samples += rep.checked;
    cal.max_components = std::max(cal.max_components, rep.max_components);
    cal.max_measure_ratio = std::max(cal.max_measure_ratio, rep.max_measure_ratio);
  }
  cal.recommended = std::max({cal.analytic, static_cast<double>(cal.max_components),
                              cal.max_measure_ratio});
  return cal;
}

double markov_table_entry(int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= kMarkovCoeffSum.size())
    throw PreconditionViolated("degree outside the Markov table");
  return static_cast<double>(kMarkovCoeffSum[static_cast<std::size_t>(n)]);
}

MarkovBound markov_coeff_bound(const PolyPhase& phase) {
  MarkovBound m;
  const auto c = phase.exact_coeffs(2);
  Rational l1 = 0;
  for (const auto& x : c) l1 += abs(x);
  m.lambda = to_double(l1);
  const int n = std::max(phase.degree() - 2, 0);
  m.Lambda = markov_table_entry(n);
  m.sup_phi2 = sup_abs_deriv(phase, Interval(0.0, 1.0), 2).value;
  m.within = m.lambda <= m.Lambda * m.sup_phi2 * (1.0 + 1e-12);
  return m;
}

VerticalNormalization normalize_vertical(const PolyPhase& phase) {
  if (phase.is_linear()) throw LinearPhaseError("normalize_vertical: phi'' vanishes identically");
  const SupResult s = sup_abs_deriv(phase, Interval(0.0, 1.0), 2);
  VerticalNormalization out;
  const Rational v0 = abs(phase.eval(Rational(0), 2));
  const Rational v1 = abs(phase.eval(Rational(1), 2));
  const Rational vend = v0 > v1 ? v0 : v1;
  if (s.value <= to_double(vend)) {
    out.factor = vend;
    out.exact = true;
  } else {
    out.factor = from_double(s.value);
  }
  out.psi = phase.scaled(Rational(1) / out.factor);
  return out;
}

PolyPhase rescale_to_unit(const PolyPhase& phase, const Rational& alpha, const Rational& beta) {
  if (!(alpha < beta)) throw PreconditionViolated("rescale_to_unit: empty interval");
  const Rational w = beta - alpha;
  return phase.compose_affine(alpha, w).scaled(Rational(1) / w);
}

PolyPhase taylor_quadratic(const PolyPhase& phase, const Rational& c) {
  const Rational f0 = phase.eval(c, 0);
  const Rational f1 = phase.eval(c, 1);
  const Rational f2 = phase.eval(c, 2) / 2;
  // f0 + f1 (s - c) + f2 (s - c)^2
  std::vector<Rational> q{f0 - f1 * c + f2 * c * c, f1 - 2 * f2 * c, f2};
  return PolyPhase(std::move(q));
}

TaylorCheck taylor_remainder_check(const PolyPhase& phase, const Rational& c, double h,
                                   const Interval& domain) {
  TaylorCheck t;
  const PolyPhase rem = (phase - taylor_quadratic(phase, c)).compose_affine(c, Rational(1));
  const double cd = to_double(c);
  const double lo = std::max(-h, domain.lo - cd);
  const double hi = std::min(h, domain.hi - cd);
  if (lo <= hi) t.sup_error = sup_abs_deriv(rem, Interval(lo, hi), 0).value;
  const double s3 = phase.degree() >= 3 ? sup_abs_deriv(phase, domain, 3).value : 0.0;
  t.bound = s3 * h * h * h / 6.0;
  t.ok = t.sup_error <= t.bound * (1.0 + 1e-12) + 1e-300;
  return t;
}

}  // namespace polydec
