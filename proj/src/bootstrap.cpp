#include "polydec/bootstrap.hpp"

#include <cmath>
#include <optional>

#include "polydec/errors.hpp"

namespace polydec {

namespace {

void require(bool ok, const std::string& what, RecursionTrace& t) {
  if (!ok) throw InvariantBreach("bootstrap: " + what);
  t.checks.push_back(what);
}

// a1 + b1 Y <= a2 + b2 Y for all Y >= ymin.
bool dominated(const Rational& a1, const Rational& b1, const Rational& a2, const Rational& b2,
               const Rational& ymin) {
  return b1 <= b2 && a1 + b1 * ymin <= a2 + b2 * ymin;
}

// Exact power of two exponent e with q = 2^{-e}, if any.
std::optional<long> dyadic_exponent(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (numerator(q) != 1) return std::nullopt;
  BigInt d = denominator(q);
  long e = 0;
  while (d > 1) {
    if (d % 2 != 0) return std::nullopt;
    d /= 2;
    ++e;
  }
  return e;
}

}  // namespace

RecursionTrace unroll_main(const Rational& K, const Rational& eps, const Rational& C, const Rational& delta) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (!(K > 1)) throw PreconditionViolated("unroll_main needs K > 1");
  if (!(eps > 0)) throw PreconditionViolated("unroll_main needs eps > 0");
  if (!(C > 0)) throw PreconditionViolated("unroll_main needs C > 0");
  if (!(delta > 0 && delta <= 1)) throw PreconditionViolated("unroll_main needs 0 < delta <= 1");

  RecursionTrace t;
  t.kind = "main";
  t.K = K;
  t.eps = eps;
  t.C = C;
  t.delta = delta;
  const Rational threeK = 3 * K;
  // M = (3K)^{q/p} for eps = p/q.
  const long p = static_cast<long>(numerator(eps));
  const long q = static_cast<long>(denominator(eps));
  const auto M = exact_root(pow(threeK, q), static_cast<unsigned>(p));
  if (!M) throw PreconditionViolated("M = (3K)^{1/eps} is irrational; exact unroll impossible");
  t.M = *M;

  int n = 0;
  Rational s = delta;
  while (s < 1) {
    s *= t.M;
    ++n;
  }
  t.n = n;
  t.terminal_scale = s;
  require(n == 0 || pow(t.M, n - 1) < 1 / delta, "n < log(1/delta)/log M + 1", t);
  require(t.terminal_scale >= 1, "terminal scale >= 1 so S(M^n delta) = 1", t);

  // Top-down from S = 1. The scale term at M^j delta is C (M^j delta)^{-eps}
  // = (3K)^{-j} Y exactly.
  std::vector<TraceStep> steps(static_cast<std::size_t>(n) + 1);
  steps[static_cast<std::size_t>(n)] = TraceStep{t.terminal_scale, Rational(1), Rational(0), "terminal S = 1"};
  for (int j = n - 1; j >= 0; --j) {
    const TraceStep& up = steps[static_cast<std::size_t>(j) + 1];
    TraceStep st;
    st.scale = delta * pow(t.M, j);
    st.a = K * up.a;
    st.b = K * (pow(threeK, -j) + up.b);
    st.rule = "D <= K (C (M^j delta)^{-eps} + S(M^{j+1} delta))";
    steps[static_cast<std::size_t>(j)] = st;
  }
  // Every level dominated by its relaxed form K^{n-j} + (n-j) K^{n-j} Y.
  const Rational ymin = C;  // delta <= 1 so Y >= C
  for (int j = 0; j <= n; ++j) {
    const auto& st = steps[static_cast<std::size_t>(j)];
    const Rational Kp = pow(K, n - j);
    if (!dominated(st.a, st.b, Kp, (n - j) * Kp, ymin))
      throw InvariantBreach("bootstrap: step bound exceeds K^m + m K^m Y at level " + std::to_string(j));
    if (j + 1 <= n) {
      const auto& up = steps[static_cast<std::size_t>(j) + 1];
      // Monotone chain: the bound grows downwards in scale.
      if (!dominated(up.a, up.b, st.a, st.b, ymin))
        throw InvariantBreach("bootstrap: chain not monotone at level " + std::to_string(j));
    }
  }
  t.checks.push_back("step bounds <= K^m + m K^m C delta^{-eps} and monotone");
  t.steps = std::move(steps);
  t.bound_a = t.steps.front().a;
  t.bound_b = t.steps.front().b;
  t.stepwise_b = n * pow(K, n);
  t.power_coeff = pow(threeK, n);
  require(t.bound_a == pow(K, n), "a = K^n exactly", t);
  require(dominated(pow(K, n), t.stepwise_b, 0, t.power_coeff, ymin),
          "K^n + n K^n C delta^{-eps} <= (3K)^n C delta^{-eps}", t);
  // (3K)^n <= 3K delta^{-eps}  <=>  M^{n-1} <= delta^{-1}.
  t.closed_form_coeff = threeK;
  t.two_eps_flag = true;
  require(n == 0 || pow(t.M, n - 1) <= 1 / delta,
          "(3K)^n C delta^{-eps} <= 3K C delta^{-2 eps} (closed form carries 2 eps)", t);
  return t;
}

RecursionTrace iterate_nonzero(const Rational& delta) {
  if (!(delta > 0 && delta < Rational(1, 4))) throw PreconditionViolated("iterate_nonzero needs 0 < delta < 1/4");
  RecursionTrace t;
  t.kind = "nonzero";
  t.delta = delta;
  const Rational quarter(1, 4);
  t.steps.push_back(TraceStep{delta, 0, 0, "start"});
  Rational cur = delta;
  while (cur < quarter) {
    // Largest m with 4^{-3m} >= cur^2, i.e. smallest 4^{-m} >= cur^{2/3}.
    const Rational sq = cur * cur;
    int m = 0;
    Rational four3 = 1;  // 4^{-3m}
    while (four3 / 64 >= sq) {
      four3 /= 64;
      ++m;
    }
    Rational next = pow(Rational(1, 4), m);
    TraceStep st;
    if (next > quarter) {
      next = quarter;
      st.clamped = true;
      st.rule = "clamped to 1/4";
    } else {
      st.rule = "smallest 4^{-m} >= delta^{2/3}";
      if (!(next * next * next >= sq)) throw InvariantBreach("bootstrap: delta' < delta^{2/3}");
    }
    if (!(next * next * next < 64 * sq)) throw InvariantBreach("bootstrap: delta' >= 4 delta^{2/3}");
    st.scale = next;
    if (!(next > cur)) throw InvariantBreach("bootstrap: scales not increasing");
    t.steps.push_back(st);
    cur = next;
  }
  t.checks.push_back("delta' in 2^{-2N} and delta^{2/3} <= delta' < 4 delta^{2/3}");
  t.n = static_cast<int>(t.steps.size()) - 1;
  t.terminal_scale = cur;
  require(t.terminal_scale == quarter, "terminal scale is exactly 1/4", t);

  const int n = t.n;
  if (const auto e = dyadic_exponent(delta)) {
    // delta^{(2/3)^{n-1}} < 1/4  <=>  e 2^{n-1} > 2 3^{n-1}.
    const BigInt lhs = BigInt(*e) * boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(n - 1));
    const BigInt rhs = 2 * boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n - 1));
    require(lhs > rhs, "delta^{(2/3)^{n-1}} < 1/4", t);
  } else {
    const double L = -std::log(to_double(delta));
    require(std::pow(2.0 / 3.0, n - 1) * L > std::log(4.0), "delta^{(2/3)^{n-1}} < 1/4", t);
  }
  const double LL = std::log(-std::log(to_double(delta)));
  require(n < 1.0 + (LL - std::log(std::log(4.0))) / std::log(1.5), "n < 1 + (log log 1/delta - log log 4) / log 3/2", t);
  require(n <= iterate_step_constant() * LL, "n <= C log log 1/delta", t);
  return t;
}

Rational geometric_exponent_sum(int n) {
  if (n < 0) throw PreconditionViolated("geometric_exponent_sum needs n >= 0");
  Rational s = 0;
  Rational term = 1;
  for (int m = 0; m < n; ++m) {
    s += term;
    term *= Rational(2, 3);
  }
  if (s != 3 * (1 - pow(Rational(2, 3), n))) throw InvariantBreach("geometric sum closed form");
  if (!(s < 3)) throw InvariantBreach("geometric sum reached 3");
  return s;
}

double iterate_step_constant() { return 1.0 / std::log(std::log(4.0)) + 1.0 / std::log(1.5); }

LogPowerCheck log_power_check(double C_eps_M, double eps, int kmax) {
  if (!(C_eps_M >= 1.0) || !(eps > 0.0)) throw PreconditionViolated("log_power_check needs C >= 1, eps > 0");
  LogPowerCheck out;
  out.C = iterate_step_constant();
  for (int k = 2; k <= kmax; ++k) {
    const RecursionTrace t = iterate_nonzero(pow(Rational(1, 4), k));
    const double L = 2.0 * k * std::log(2.0);
    const double expo = out.C * std::log(C_eps_M);
    const double lhs_log = t.n * std::log(C_eps_M);
    const double rhs_log = expo * std::log(L);
    if (lhs_log > rhs_log * (1 + 1e-12) + 1e-12) out.powers_dominated = false;
    out.needed_constant = std::max(out.needed_constant, std::exp(rhs_log - eps * L));
  }
  return out;
}

}  // namespace polydec
