#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polydec/interval.hpp"
#include "polydec/phase_analysis.hpp"
#include "polydec/poly_phase.hpp"
#include "polydec/rational.hpp"

namespace polydec {

enum class PMode { exact, taylor };

enum class Tri { unchecked, yes, no };

struct Partition {
  Interval base;
  std::vector<double> cuts;  // cuts.front() == base.lo, cuts.back() == base.hi
  double scale_r = 0.0;
  Tri super_admissible = Tri::unchecked;
  Tri sub_admissible = Tri::unchecked;

  Partition() = default;
  Partition(Interval base_, std::vector<double> cuts_, double r);

  std::size_t size() const noexcept { return cuts.empty() ? 0 : cuts.size() - 1; }
  Interval cell(std::size_t i) const { return Interval(cuts[i], cuts[i + 1]); }
  std::vector<Interval> cells() const;

  /// Throws PreconditionViolated unless cuts span base strictly increasingly.
  void validate() const;

  static Partition trivial(const Interval& base, double r);
  /// n equal cells.
  static Partition uniform(const Interval& base, std::size_t n, double r);
};

struct DeviationWitness {
  double value = 0.0;  // sup |phi(s) - phi(c) - phi'(c)(s - c)|
  double s = 0.0;
  double c = 0.0;
};

/// Exact-mode tangent deviation on subintervals of a fixed domain.
///
/// For fixed c the deviation D(s) = phi(s) - phi(c) - phi'(c)(s - c) has
/// dD/ds = phi'(s) - phi'(c) and dD/dc = -phi''(c)(s - c), so an interior
/// maximizer of |D| over I x I has c in {endpoints} u {sign changes of
/// phi''} and s at an endpoint or a sign change of phi'(s) - phi'(c). Between
/// consecutive roots of phi'' the map s -> phi'(s) is monotone, so each piece
/// holds at most one such s. D is evaluated from the Taylor expansion at c.
class TangentDeviation {
 public:
  TangentDeviation(const PolyPhase& phase, const Interval& domain);

  const PolyPhase& phase() const noexcept { return roots_.phase(); }
  const DerivativeRoots& roots() const noexcept { return roots_; }

  DeviationWitness max_deviation(const Interval& I) const;
  /// sup_{s in I} |D(s, c)| for one fixed tangent point c.
  DeviationWitness max_deviation_at(const Interval& I, double c) const;
  /// sup_I |phi''|.
  double sup_phi2(const Interval& I) const { return sup_abs_deriv(roots_, I, 2).value; }

  bool property_P(const Interval& I, double r, PMode mode) const;

 private:
  DeviationWitness scan_c(const Interval& I, double c, const std::vector<double>& pts) const;

  DerivativeRoots roots_;
};

bool check_property_P(const PolyPhase& phase, const Interval& I, double r, PMode mode);

bool is_super_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode);
bool is_sub_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode);
bool is_admissible(const PolyPhase& phase, const Partition& P, double r, PMode mode);

/// Sets both flags by running the predicates.
Partition with_flags(const PolyPhase& phase, Partition P, PMode mode);

struct GreedyStep {
  double t_ok = 0.0;    // accepted cut
  double t_fail = 0.0;  // smallest tested t with [a, t] failing P(r)
};

struct GreedyResult {
  Partition partition;
  std::vector<GreedyStep> steps;
  double step_lower_bound = 0.0;  // 2 sqrt(r / sup |phi''|)
};

/// Left-greedy admissible partition; cut tolerance 1e-14 |I0|.
GreedyResult greedy_admissible_traced(const PolyPhase& phase, const Interval& I0, double r,
                                      PMode mode);
Partition greedy_admissible(const PolyPhase& phase, const Interval& I0, double r, PMode mode);

/// Uniform partition of [0, 1] into cells of length delta^{1/2}; requires
/// delta^{-1/2} to be an integer.
Partition canonical_partition(const Rational& delta);

/// Merges [a_{2k}, a_{2k+2}], leaving a final odd cell alone; asserts the
/// length bound 2 sqrt(delta / sup|phi''|) on all merged cells but the last.
Partition coarsen_pairs(const Partition& P, const PolyPhase& phase, double delta);

/// n <= delta^{-1/2} sup|phi''|^{1/2} + 1.
bool count_bound(const Partition& P, const PolyPhase& phase, double delta);

struct TilingResult {
  double l = 0.0;
  std::vector<std::size_t> u1;  // indices of intervals inside [(j-1)l, jl]
  std::vector<std::size_t> u2;  // indices of intervals inside [(j-1/2)l, (j+1/2)l]
  std::vector<long> cell_index;  // per interval: j
  std::vector<bool> shifted;     // per interval: true for u2
  std::size_t max_per_cell = 0;
};

TilingResult tile(std::span<const Interval> intervals, double l0);

struct DyadicBlock {
  int n = 0;
  Interval block;
  Partition cells;
  Rational a_n;
  bool sub_admissible = false;
  double min_union_ratio = 0.0;  // min over adjacent unions of deviation / (2 a_n)
};

struct DyadicDecomposition {
  Rational delta;
  int d = 0;
  std::vector<DyadicBlock> blocks;
  std::optional<Interval> uncovered;  // cells not reached by any block
};

/// Blocks n = 1..log2(delta^{-1/2}) with P_n = {Delta_k : 2^{n-1} <= k < 2^n},
/// Delta_k = [(k-1) delta^{1/2}, k delta^{1/2}], a_n = 2^{dn} delta^{d/2}.
/// Sub-admissibility of P_n for s^d at scale a_n is reported, not asserted.
DyadicDecomposition dyadic_blocks(const Rational& delta, int d);

/// log2 of delta^{-1/2} when delta is in 2^{-2N}; nullopt otherwise.
std::optional<int> dyadic_half_exponent(const Rational& delta);

}  // namespace polydec
