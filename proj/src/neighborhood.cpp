#include "polydec/neighborhood.hpp"

#include <algorithm>
#include <cmath>

#include "polydec/errors.hpp"
#include "polydec/kernels/minkowski_scan.hpp"

namespace polydec {

bool contains(const NeighborhoodSpec& nb, double s, double t) {
  if (!nb.I.contains(s)) return false;
  const Rational gap = from_double(t) - nb.phase.eval(from_double(s));
  return abs(gap) <= from_double(nb.r);
}

bool Parallelogram::contains(double s, double t) const noexcept {
  return base.contains(s) && std::fabs(t - line(s)) <= half_height;
}

Parallelogram cap_parallelogram(const PolyPhase& phase, const Interval& I, double r) {
  const TangentDeviation dev(phase, I);
  if (!dev.property_P(I, r, PMode::exact))
    throw NotAdmissibleCell("cap_parallelogram: " + to_string(I) + " fails P(r)");
  Parallelogram p;
  p.base = I;
  p.center = I.midpoint();
  p.slope = phase.eval(p.center, 1);
  p.intercept = phase.eval(p.center, 0);
  p.half_height = 3.0 * r;
  p.required_half_height = dev.max_deviation_at(I, p.center).value + r;
  return p;
}

DualRect::DualRect(double x, double y) : x_len(x), y_len(y) {
  if (!(x > 0.0 && y > 0.0)) throw PreconditionViolated("dual rectangle needs positive sides");
}

namespace {

double ipow(double x, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= x;
  return r;
}

}  // namespace

MinkowskiReport minkowski_contained_rect(int d, const Rational& delta, int n, double C,
                                         double u_max, double v_max, std::size_t grid_points,
                                         bool parallel) {
  if (d < 3) throw PreconditionViolated("minkowski_contained needs d >= 3");
  const auto m = dyadic_half_exponent(delta);
  if (!m || n < 1 || n > *m) throw PreconditionViolated("minkowski_contained: bad (delta, n)");
  if (grid_points < 2) throw PreconditionViolated("grid needs at least two points per axis");
  MinkowskiReport rep;
  rep.d = d;
  rep.delta = to_double(delta);
  rep.n = n;
  rep.C = C > 0.0 ? C : d * std::ldexp(1.0, d);
  const double h = std::ldexp(1.0, -*m);
  rep.a_n = to_double(pow(Rational(2), static_cast<long>(d) * n) * pow(Rational(1) / pow(Rational(2), *m), d));
  const double block_lo = (std::ldexp(1.0, n - 1) - 1.0) * h;
  const double block_hi = (std::ldexp(1.0, n) - 1.0) * h;
  const double lo = block_lo + h;
  const double hi = block_hi - h;
  if (!(lo < hi)) return rep;  // I'_n empty: vacuous
  rep.inner = Interval(lo, hi);
  rep.horizontal_ok = lo - u_max >= block_lo && hi + u_max <= block_hi && block_hi <= 1.0;

  // |s^d + v - (s+u)^d| <= |(s+u)^d - s^d| + |v|; the u-part is largest at
  // s = hi, u = +u_max because s - u_max >= 0 throughout.
  rep.closed_form_ratio = (ipow(hi + u_max, d) - ipow(hi, d) + v_max) / rep.a_n;

  kernels::MinkowskiGrid g{d, lo, hi, u_max, grid_points, grid_points};
  const double gmax = parallel ? kernels::minkowski_grid_max_omp(g) : kernels::minkowski_grid_max_serial(g);
  const double hs = (hi - lo) / static_cast<double>(grid_points - 1);
  const double hu = 2.0 * u_max / static_cast<double>(grid_points - 1);
  const double top = hi + u_max;
  const double lip_s = d * (d - 1) * ipow(top, d - 2) * u_max;
  const double lip_u = d * ipow(top, d - 1);
  const double slack = 0.5 * (lip_s * hs + lip_u * hu);
  rep.grid_ratio = (gmax + v_max) / rep.a_n;
  rep.certified_ratio = (gmax + v_max + slack) / rep.a_n;
  rep.contained = rep.horizontal_ok && rep.certified_ratio <= rep.C;
  return rep;
}

MinkowskiReport minkowski_contained(int d, const Rational& delta, int n, double C,
                                    std::size_t grid_points, bool parallel) {
  const double dl = to_double(delta);
  return minkowski_contained_rect(d, delta, n, C, dl, std::pow(dl, 0.5 * d), grid_points, parallel);
}

OverlapReport neighbor_truncation_overlap(const Partition& P, const DualRect& dual) {
  P.validate();
  const double w = dual.x_len;
  for (std::size_t k = 0; k < P.size(); ++k) {
    if (w > P.cell(k).length())
      throw PreconditionViolated("neighbor_truncation_overlap: x_len exceeds cell " + to_string(P.cell(k)));
  }
  OverlapReport rep;
  for (std::size_t k = 0; k < P.size(); ++k) {
    OverlapEntry e;
    e.k = k;
    const Interval target = P.cell(k);
    for (std::size_t j = 0; j < P.size(); ++j) {
      const Interval smeared(P.cuts[j] - w, P.cuts[j + 1] + w);
      if (overlap_length(smeared, target) > 0.0) {
        e.overlapping.push_back(j);
        if (j + 1 < k || j > k + 1) rep.adjacent_only = false;
      }
    }
    rep.cells.push_back(std::move(e));
  }
  if (!rep.adjacent_only) throw InvariantBreach("smeared cell support reaches beyond k-1, k, k+1");
  return rep;
}

}  // namespace polydec
