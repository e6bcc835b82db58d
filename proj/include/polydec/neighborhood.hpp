#pragma once

#include <optional>
#include <vector>

#include "polydec/interval.hpp"
#include "polydec/partition.hpp"
#include "polydec/poly_phase.hpp"
#include "polydec/rational.hpp"

namespace polydec {

struct NeighborhoodSpec {
  PolyPhase phase;
  Interval I;
  double r = 0.0;
};

/// s in I and |t - phi(s)| <= r, decided in exact arithmetic.
bool contains(const NeighborhoodSpec& nb, double s, double t);

struct Parallelogram {
  Interval base;
  double center = 0.0;  // tangent point c
  double slope = 0.0;      // phi'(c)
  double intercept = 0.0;  // phi(c)
  double half_height = 0.0;
  /// sup_{s in I} |phi(s) - line(s)| + r, the smallest half-height that
  /// still contains the neighbourhood.
  double required_half_height = 0.0;

  double line(double s) const noexcept { return intercept + slope * (s - center); }
  bool contains(double s, double t) const noexcept;
  double area() const noexcept { return 2.0 * half_height * base.length(); }
};

/// Tangent parallelogram at the midpoint with half-height 3r; throws
/// NotAdmissibleCell if I fails P(r).
Parallelogram cap_parallelogram(const PolyPhase& phase, const Interval& I, double r);

struct DualRect {
  double x_len = 0.0;
  double y_len = 0.0;

  DualRect() = default;
  DualRect(double x, double y);
  DualRect dual() const { return DualRect(1.0 / x_len, 1.0 / y_len); }
};

struct MinkowskiReport {
  int d = 0;
  double delta = 0.0;
  int n = 0;
  double C = 0.0;
  double a_n = 0.0;
  std::optional<Interval> inner;  // I'_n; empty for blocks of <= 2 cells
  bool horizontal_ok = true;
  double grid_ratio = 0.0;       // grid max / a_n
  double certified_ratio = 0.0;  // (grid max + Lipschitz slack) / a_n
  double closed_form_ratio = 0.0;
  bool contained = true;
};

/// Gamma_n + T* inside N^{s^d}_{I_n, C a_n}, with T* = [-delta, delta] x
/// [-delta^{d/2}, delta^{d/2}] and Gamma_n the graph over I'_n. C <= 0
/// selects the default d 2^d.
MinkowskiReport minkowski_contained(int d, const Rational& delta, int n, double C = 0.0,
                                    std::size_t grid_points = 512, bool parallel = true);

/// Same geometry with an explicit dual rectangle (|u| <= u_max, |v| <= v_max).
MinkowskiReport minkowski_contained_rect(int d, const Rational& delta, int n, double C,
                                         double u_max, double v_max,
                                         std::size_t grid_points = 512, bool parallel = true);

struct OverlapEntry {
  std::size_t k = 0;  // cell index within the partition
  std::vector<std::size_t> overlapping;
};

struct OverlapReport {
  std::vector<OverlapEntry> cells;
  bool adjacent_only = true;
};

/// For each cell, the cells whose smear by [-x_len, x_len] meets it in a set of
/// positive length. Throws PreconditionViolated if x_len exceeds a cell length
/// and InvariantBreach if an overlap falls outside {k-1, k, k+1}.
OverlapReport neighbor_truncation_overlap(const Partition& P, const DualRect& dual);

}  // namespace polydec
