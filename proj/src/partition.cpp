#include "polydec/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "polydec/errors.hpp"
#include "polydec/roots.hpp"

namespace polydec {

Partition::Partition(Interval base_, std::vector<double> cuts_, double r)
    : base(base_), cuts(std::move(cuts_)), scale_r(r) {
  validate();
}

std::vector<Interval> Partition::cells() const {
  std::vector<Interval> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(cell(i));
  return out;
}

void Partition::validate() const {
  if (cuts.size() < 2) throw PreconditionViolated("partition needs at least two cuts");
  if (cuts.front() != base.lo || cuts.back() != base.hi)
    throw PreconditionViolated("partition cuts do not span the base interval");
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) throw PreconditionViolated("partition cuts not increasing");
  }
}

Partition Partition::trivial(const Interval& base, double r) {
  return Partition(base, {base.lo, base.hi}, r);
}

Partition Partition::uniform(const Interval& base, std::size_t n, double r) {
  if (n == 0) throw PreconditionViolated("uniform partition with zero cells");
  std::vector<double> c(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    c[i] = base.lo + (base.hi - base.lo) * static_cast<double>(i) / static_cast<double>(n);
  c.back() = base.hi;
  return Partition(base, std::move(c), r);
}

TangentDeviation::TangentDeviation(const PolyPhase& phase, const Interval& domain)
    : roots_(phase, domain) {}

namespace {

std::vector<double> breakpoints(const DerivativeRoots& roots, const Interval& I) {
  const auto inner = roots.roots_in(2, I);
  std::vector<double> pts;
  pts.reserve(inner.size() + 2);
  pts.push_back(I.lo);
  pts.insert(pts.end(), inner.begin(), inner.end());
  pts.push_back(I.hi);
  return pts;
}

}  // namespace

DeviationWitness TangentDeviation::scan_c(const Interval& I, double c,
                                          const std::vector<double>& pts) const {
  const PolyPhase& phi = phase();
  const int deg = phi.degree();
  DeviationWitness best{0.0, I.lo, c};
  if (deg > 64) throw PreconditionViolated("tangent deviation supports degree <= 64");
  double t[65] = {};
  double fact = 1.0;
  for (int k = 2; k <= deg; ++k) {
    fact *= k;
    t[k] = phi.eval(c, k) / fact;
  }
  // D(h) = sum_{k>=2} t_k h^k, g(h) = D'(h).
  auto D = [&](double h) {
    double acc = 0.0;
    for (int k = deg; k >= 2; --k) acc = acc * h + t[k];
    return acc * h * h;
  };
  auto g = [&](double h) {
    double acc = 0.0;
    for (int k = deg; k >= 2; --k) acc = acc * h + k * t[k];
    return acc * h;
  };
  auto consider = [&](double s) {
    const double v = std::fabs(D(s - c));
    if (v > best.value) best = {v, s, c};
  };
  double g_prev = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double gi = g(pts[i] - c);
    consider(pts[i]);
    if (i > 0 && ((g_prev < 0 && gi > 0) || (g_prev > 0 && gi < 0))) {
      consider(bisect([&](double x) { return g(x - c); }, pts[i - 1], pts[i], g_prev));
    }
    g_prev = gi;
  }
  return best;
}

DeviationWitness TangentDeviation::max_deviation_at(const Interval& I, double c) const {
  if (phase().degree() <= 1 || I.empty()) return {0.0, I.lo, c};
  return scan_c(I, c, breakpoints(roots_, I));
}

DeviationWitness TangentDeviation::max_deviation(const Interval& I) const {
  DeviationWitness best{0.0, I.lo, I.lo};
  if (phase().degree() <= 1 || I.empty()) return best;
  const auto pts = breakpoints(roots_, I);
  for (double c : pts) {
    const DeviationWitness w = scan_c(I, c, pts);
    if (w.value > best.value) best = w;
  }
  return best;
}

bool TangentDeviation::property_P(const Interval& I, double r, PMode mode) const {
  if (!(r > 0.0)) throw PreconditionViolated("property P needs r > 0");
  if (phase().is_linear()) return true;
  if (mode == PMode::taylor) {
    const double L = I.length();
    return sup_phi2(I) * L * L <= 4.0 * r;
  }
  return max_deviation(I).value <= 2.0 * r;
}

bool check_property_P(const PolyPhase& phase, const Interval& I, double r, PMode mode) {
  return TangentDeviation(phase, I).property_P(I, r, mode);
}

bool is_super_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode) {
  P.validate();
  const TangentDeviation dev(phase, P.base);
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (!dev.property_P(P.cell(i), r, mode)) return false;
  }
  return true;
}

bool is_sub_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode) {
  P.validate();
  const TangentDeviation dev(phase, P.base);
  for (std::size_t i = 0; i + 1 < P.size(); ++i) {
    if (dev.property_P(Interval(P.cuts[i], P.cuts[i + 2]), r, mode)) return false;
  }
  return true;
}

bool is_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode) {
  return is_super_admissible(phase, P, r, mode) && is_sub_admissible(phase, P, r, mode);
}

Partition with_flags(const PolyPhase& phase, Partition P, PMode mode) {
  P.super_admissible = is_super_admissible(phase, P, P.scale_r, mode) ? Tri::yes : Tri::no;
  P.sub_admissible = is_sub_admissible(phase, P, P.scale_r, mode) ? Tri::yes : Tri::no;
  return P;
}

GreedyResult greedy_admissible_traced(const PolyPhase& phase, const Interval& I0, double r,
                                      PMode mode) {
  if (!(r > 0.0)) throw PreconditionViolated("greedy_admissible needs r > 0");
  if (I0.empty()) throw PreconditionViolated("greedy_admissible on an empty interval");
  GreedyResult res;
  if (phase.is_linear()) {
    res.partition = Partition::trivial(I0, r);
    return res;
  }
  const TangentDeviation dev(phase, I0);
  const double M = dev.sup_phi2(I0);
  if (!(M > 0.0)) {
    res.partition = Partition::trivial(I0, r);
    return res;
  }
  res.step_lower_bound = 2.0 * std::sqrt(r / M);
  const double tol = 1e-14 * I0.length();

  // Signed excess of the predicate; <= 0 means P(r) holds on [a, t].
  auto excess = [&](double a, double t) {
    const Interval J(a, t);
    if (mode == PMode::taylor) {
      const double L = J.length();
      return dev.sup_phi2(J) * L * L - 4.0 * r;
    }
    return dev.max_deviation(J).value - 2.0 * r;
  };

  std::vector<double> cuts{I0.lo};
  double a = I0.lo;
  while (true) {
    const double f_hi = excess(a, I0.hi);
    if (f_hi <= 0.0) {
      if (I0.hi > a) cuts.push_back(I0.hi);
      break;
    }
    double t_ok = std::min(a + res.step_lower_bound, I0.hi);
    double f_ok = excess(a, t_ok);
    if (f_ok > 0.0) {
      // Rounding at the Taylor bound; start the bracket at a.
      t_ok = a;
      f_ok = -2.0 * r;
    }
    double t_fail = I0.hi;
    double f_fail = f_hi;
    int side = 0;
    for (int iter = 0; iter < 400 && t_fail - t_ok > tol; ++iter) {
      double t = t_fail - f_fail * (t_fail - t_ok) / (f_fail - f_ok);
      const double w = t_fail - t_ok;
      if (!(t > t_ok + 0.01 * tol && t < t_fail - 0.01 * tol) || iter % 8 == 7) {
        t = t_ok + 0.5 * w;
      }
      if (t <= t_ok || t >= t_fail) break;
      const double f = excess(a, t);
      if (f <= 0.0) {
        t_ok = t;
        f_ok = f;
        if (side == -1) f_fail *= 0.5;
        side = -1;
      } else {
        t_fail = t;
        f_fail = f;
        if (side == 1) f_ok *= 0.5;
        side = 1;
      }
    }
    if (!(t_ok > a)) throw InvariantBreach("greedy_admissible made no progress");
    if (t_ok < I0.hi && t_ok - a < res.step_lower_bound * (1.0 - 1e-9))
      throw InvariantBreach("greedy step below 2 sqrt(r / sup|phi''|)");
    res.steps.push_back({t_ok, t_fail});
    cuts.push_back(t_ok);
    a = t_ok;
    if (a >= I0.hi) break;
  }
  res.partition = Partition(I0, std::move(cuts), r);
  return res;
}

Partition greedy_admissible(const PolyPhase& phase, const Interval& I0, double r, PMode mode) {
  return greedy_admissible_traced(phase, I0, r, mode).partition;
}

std::optional<int> dyadic_half_exponent(const Rational& delta) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (numerator(delta) != 1) return std::nullopt;
  BigInt q = denominator(delta);
  int e = 0;
  while (q > 1) {
    if (q % 4 != 0) return std::nullopt;
    q /= 4;
    ++e;
  }
  return e;
}

Partition canonical_partition(const Rational& delta) {
  if (!(delta > 0 && delta <= 1)) throw PreconditionViolated("canonical partition needs 0 < delta <= 1");
  const auto root = exact_root(Rational(1) / delta, 2);
  if (!root || boost::multiprecision::denominator(*root) != 1)
    throw PreconditionViolated("canonical partition needs delta^{-1/2} to be an integer");
  const auto n = static_cast<std::size_t>(boost::multiprecision::numerator(*root));
  return Partition::uniform(Interval(0.0, 1.0), n, to_double(delta));
}

Partition coarsen_pairs(const Partition& P, const PolyPhase& phase, double delta) {
  P.validate();
  if (P.size() <= 1) return P;
  std::vector<double> cuts;
  for (std::size_t i = 0; i < P.cuts.size(); i += 2) cuts.push_back(P.cuts[i]);
  if (cuts.back() != P.base.hi) cuts.push_back(P.base.hi);
  Partition Q(P.base, std::move(cuts), P.scale_r);
  if (!phase.is_linear()) {
    const double M = sup_abs_deriv(phase, P.base, 2).value;
    const double bound = 2.0 * std::sqrt(delta / M);
    for (std::size_t i = 0; i + 1 < Q.size(); ++i) {
      if (Q.cell(i).length() < bound * (1.0 - 1e-12))
        throw InvariantBreach("coarsened cell shorter than 2 sqrt(delta / sup|phi''|); input not sub-admissible");
    }
  }
  return Q;
}

bool count_bound(const Partition& P, const PolyPhase& phase, double delta) {
  const double M = phase.is_linear() ? 0.0 : sup_abs_deriv(phase, P.base, 2).value;
  return static_cast<double>(P.size()) <= std::sqrt(M / delta) + 1.0;
}

TilingResult tile(std::span<const Interval> intervals, double l0) {
  if (!(l0 > 0.0 && l0 <= 0.25)) throw PreconditionViolated("tile needs 0 < l0 <= 1/4");
  const double slack = 1e-12 * l0;
  std::vector<std::size_t> order(intervals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return intervals[x].lo < intervals[y].lo; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Interval& I = intervals[order[k]];
    const double L = I.length();
    if (I.lo < 0.0 || I.hi > 1.0 || L < l0 - slack || L > 2.0 * l0 + slack)
      throw PreconditionViolated("tile: interval " + to_string(I) + " violates the length/range precondition");
    if (k > 0 && overlap_length(intervals[order[k - 1]], I) > 0.0)
      throw PreconditionViolated("tile: interval " + to_string(I) + " overlaps its neighbour");
  }

  TilingResult res;
  res.l = 1.0;
  while (res.l * 0.5 >= 4.0 * l0) res.l *= 0.5;
  const double l = res.l;
  res.cell_index.assign(intervals.size(), 0);
  res.shifted.assign(intervals.size(), false);
  std::map<std::pair<bool, long>, std::size_t> counts;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& I = intervals[i];
    // I inside [(j-1) l, j l] ?
    const long j = static_cast<long>(std::floor(I.lo / l)) + 1;
    if (I.hi <= static_cast<double>(j) * l) {
      res.u1.push_back(i);
      res.cell_index[i] = j;
    } else {
      // Straddles j l; the length is below l / 2 so it sits in the
      // half-shifted cell centred there.
      const double lo = (static_cast<double>(j) - 0.5) * l;
      const double hi = (static_cast<double>(j) + 0.5) * l;
      if (I.lo < lo || I.hi > hi) throw InvariantBreach("tile: interval escapes its shifted cell");
      res.u2.push_back(i);
      res.cell_index[i] = j;
      res.shifted[i] = true;
    }
    const std::size_t c = ++counts[{res.shifted[i], res.cell_index[i]}];
    res.max_per_cell = std::max(res.max_per_cell, c);
  }
  if (res.max_per_cell >= 8) throw InvariantBreach("tile: a cell holds 8 or more intervals");
  return res;
}

DyadicDecomposition dyadic_blocks(const Rational& delta, int d) {
  if (d < 3) throw PreconditionViolated("dyadic_blocks needs d >= 3");
  const auto m = dyadic_half_exponent(delta);
  if (!m || *m < 1) throw PreconditionViolated("dyadic_blocks needs delta in 2^{-2N}, delta < 1");
  DyadicDecomposition out;
  out.delta = delta;
  out.d = d;
  const Rational h = Rational(1) / pow(Rational(2), *m);  // delta^{1/2}
  const PolyPhase sd = PolyPhase::monomial(d);
  const TangentDeviation dev(sd, Interval(0.0, 1.0));
  for (int n = 1; n <= *m; ++n) {
    DyadicBlock b;
    b.n = n;
    const long k0 = 1L << (n - 1);
    const long k1 = (1L << n) - 1;  // inclusive
    std::vector<double> cuts;
    for (long k = k0; k <= k1 + 1; ++k) cuts.push_back(to_double(Rational(k - 1) * h));
    b.block = Interval(cuts.front(), cuts.back());
    b.a_n = pow(Rational(2), static_cast<long>(d) * n) * pow(h, d);
    const double r = to_double(b.a_n);
    b.cells = Partition(b.block, cuts, r);
    b.sub_admissible = true;
    b.min_union_ratio = 0.0;
    bool first = true;
    for (std::size_t i = 0; i + 1 < b.cells.size(); ++i) {
      const double v = dev.max_deviation(Interval(cuts[i], cuts[i + 2])).value / (2.0 * r);
      b.min_union_ratio = first ? v : std::min(b.min_union_ratio, v);
      first = false;
      if (v <= 1.0) b.sub_admissible = false;
    }
    b.cells.sub_admissible = b.sub_admissible ? Tri::yes : Tri::no;
    out.blocks.push_back(std::move(b));
  }
  const double last = out.blocks.back().block.hi;
  if (last < 1.0) out.uncovered = Interval(last, 1.0);
  return out;
}

}  // namespace polydec
