#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polydec/interval.hpp"
#include "polydec/poly_phase.hpp"
#include "polydec/rational.hpp"

namespace polydec {

struct SupResult {
  double value = 0.0;
  double at = 0.0;
};

/// Sign-changing roots of every derivative of a phase over a fixed domain,
/// computed once top-down (roots of phi^(k+1) split phi^(k) into monotone
/// pieces). Queries on subintervals of the domain reuse them.
class DerivativeRoots {
 public:
  DerivativeRoots(PolyPhase phase, Interval domain);

  const PolyPhase& phase() const noexcept { return phase_; }
  const Interval& domain() const noexcept { return domain_; }

  /// Roots of phi^(order) in the domain. Orders above the degree have none.
  std::span<const double> roots(int order) const;
  /// Roots of phi^(order) strictly inside I.
  std::vector<double> roots_in(int order, const Interval& I) const;

 private:
  PolyPhase phase_;
  Interval domain_;
  std::vector<std::vector<double>> roots_;  // [order]
};

double eval_deriv(const PolyPhase& phase, double s, int order);

SupResult sup_abs_deriv(const PolyPhase& phase, const Interval& I, int order);
SupResult sup_abs_deriv(const DerivativeRoots& cache, const Interval& I, int order);

struct DdParams {
  int d = 1;
  double C_d = 2.0;
  double sigma = 0.1;

  /// Throws PreconditionViolated unless d >= 1, C_d > 1, 0 < sigma < C_d^-d.
  void validate() const;
};

struct BadSet {
  Interval parent;
  std::vector<Interval> components;  // relatively open in parent
  double threshold = 0.0;

  double measure() const noexcept;
};

/// Components of {s in J : |phi''(s)| < sigma (sup_J|phi''| + |J| sup_J|phi'''|)}.
/// Default root width is 1e-12 |J|. A point where |phi''| touches the
/// threshold without crossing does not split a component.
BadSet bad_set(const PolyPhase& phase, const Interval& J, const DdParams& params,
               double root_width = -1.0);

struct MembershipViolation {
  double sigma = 0.0;
  Interval J;
  std::size_t components = 0;
  double measure = 0.0;
  double measure_bound = 0.0;
};

struct MembershipReport {
  std::size_t checked = 0;
  std::size_t max_components = 0;
  double max_measure_ratio = 0.0;  // |B| / (sigma^{1/d} |J|)
  std::vector<MembershipViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Checks every (sigma, J) pair; sample_sigmas and sample_intervals are
/// zipped when equally long, otherwise crossed.
MembershipReport check_Dd_membership(const PolyPhase& phase, const DdParams& params,
                                     std::span<const double> sample_sigmas,
                                     std::span<const Interval> sample_intervals);

/// Remez + Markov constant for degree(phi'') <= d:
/// |B| <= 4 (1 + 2n^2)^{1/n} sigma^{1/n} |J| and at most n + 1 components.
double analytic_Cd(int d);

struct CdCalibration {
  int d = 1;
  double analytic = 0.0;
  std::size_t max_components = 0;
  double max_measure_ratio = 0.0;
  double recommended = 0.0;  // max(analytic, observed)
  std::size_t samples = 0;
};

/// Empirical calibration over random phases with deg phi'' <= d.
CdCalibration calibrate_Cd(int d, std::size_t phases, std::size_t pairs_per_phase,
                           std::uint64_t seed);

struct MarkovBound {
  double lambda = 0.0;  // sum |coeffs of phi''|
  double Lambda = 0.0;  // tabulated degree-only bound
  double sup_phi2 = 0.0;
  bool within = false;
};

/// Caller normalizes sup_[0,1] |phi''| = 1; the sup is measured and the table
/// entry scaled by it, so the assertion lambda <= Lambda * sup holds for any
/// input.
MarkovBound markov_coeff_bound(const PolyPhase& phase);

/// Lambda(n) for deg phi'' = n.
double markov_table_entry(int n);

struct VerticalNormalization {
  PolyPhase psi;
  Rational factor;
  bool exact = false;  // factor equals sup |phi''| exactly
};

/// psi = phi / sup_[0,1] |phi''|. Throws LinearPhaseError for linear phi.
VerticalNormalization normalize_vertical(const PolyPhase& phase);

/// psi(s') = (beta - alpha)^{-1} phi(alpha + (beta - alpha) s').
PolyPhase rescale_to_unit(const PolyPhase& phase, const Rational& alpha, const Rational& beta);

/// Quadratic Taylor polynomial of phi at c.
PolyPhase taylor_quadratic(const PolyPhase& phase, const Rational& c);

struct TaylorCheck {
  double sup_error = 0.0;
  double bound = 0.0;  // sup_[c-h,c+h] |phi'''| h^3 / 6
  bool ok = false;
};

/// sup over s in [c - h, c + h] intersect domain of |phi - p|.
TaylorCheck taylor_remainder_check(const PolyPhase& phase, const Rational& c, double h,
                                   const Interval& domain = Interval(0.0, 1.0));

}  // namespace polydec
