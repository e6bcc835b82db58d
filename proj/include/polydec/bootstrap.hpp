#pragma once

#include <string>
#include <vector>

#include "polydec/rational.hpp"

namespace polydec {

/// One scale of a recursion trace. For the main recursion the bound is
/// a + b Y with Y = C delta^{-eps} at the starting scale delta.
struct TraceStep {
  Rational scale;
  Rational a;
  Rational b;
  std::string rule;
  bool clamped = false;  // iterate_nonzero: forced terminal step to 1/4
};

struct RecursionTrace {
  std::string kind;  // "main" or "nonzero"
  std::vector<TraceStep> steps;  // increasing scale
  Rational K, eps, M, C;
  Rational delta;
  int n = 0;
  Rational terminal_scale;
  Rational bound_a, bound_b;     // exact unroll
  Rational stepwise_b;           // n K^n (a = K^n)
  Rational power_coeff;          // (3K)^n
  Rational closed_form_coeff;    // 3K, multiplying C delta^{-2 eps}
  bool two_eps_flag = false;     // the closed form carries delta^{-2 eps}
  std::vector<std::string> checks;  // assertions that held
};

/// Unrolls D(delta) <= K (C delta^{-eps} + sup_{delta' >= M delta} D(delta'))
/// with M = (3K)^{1/eps} down from the terminal scale M^n delta >= 1 where
/// S = 1. Everything is exact; M must be rational. InvariantBreach if a
/// claimed inequality fails.
RecursionTrace unroll_main(const Rational& K, const Rational& eps, const Rational& C, const Rational& delta);

/// delta -> the smallest 4^{-m} >= delta^{2/3}, clamped to 1/4, until 1/4.
RecursionTrace iterate_nonzero(const Rational& delta);

/// sum_{m < n} (2/3)^m, asserted equal to 3 (1 - (2/3)^n) and < 3.
Rational geometric_exponent_sum(int n);

/// 1 / log log 4 + 1 / log(3/2): n < 1 + (log log delta^{-1} - log log 4) / log(3/2)
/// gives n <= C log log delta^{-1} for delta < 1/4.
double iterate_step_constant();

struct LogPowerCheck {
  double C = 0.0;             // iterate_step_constant()
  double needed_constant = 0.0;  // max over delta of (log delta^{-1})^{C log C_eps_M} / delta^{-eps}
  bool powers_dominated = true;  // C_eps_M^n <= (log delta^{-1})^{C log C_eps_M} for every delta
};

/// Numerical check over delta = 2^{-2k}, 2 <= k <= kmax.
LogPowerCheck log_power_check(double C_eps_M, double eps, int kmax = 64);

}  // namespace polydec
