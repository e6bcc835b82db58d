#include <cmath>
#include <vector>

#include "doctest.h"
#include "polydec/errors.hpp"
#include "polydec/phase_analysis.hpp"
#include "polydec/poly_phase.hpp"
#include "polydec/rng.hpp"
#include "polydec/roots.hpp"

using namespace polydec;

namespace {

PolyPhase P(std::string_view s) { return parse_phase(s); }

// Dense scan used as an independent oracle for sup norms.
double grid_sup(const PolyPhase& phi, double lo, double hi, int order, int n = 1000000) {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = lo + (hi - lo) * i / n;
    m = std::max(m, std::fabs(phi.eval(s, order)));
  }
  return m;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0010/004") == Rational(5, 2));
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(from_double(0.1) != Rational(1, 10));
  CHECK(to_double(from_double(0.1)) == 0.1);
  CHECK(*exact_root(Rational(1, 46656), 3) == Rational(1, 36));
  CHECK_FALSE(exact_root(Rational(2), 2).has_value());
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}

TEST_CASE("phase parsing") {
  CHECK(P("s^3") == PolyPhase::monomial(3));
  CHECK(P("2*s^3 + s") == PolyPhase({0, 1, 0, 2}));
  CHECK(P("1/6*s^3") == PolyPhase({0, 0, 0, Rational(1, 6)}));
  CHECK(P("s^4 - s^2") == PolyPhase({0, 0, -1, 0, 1}));
  CHECK(P("-s + 1e-3 s^2") == PolyPhase({0, -1, Rational(1, 1000)}));
  CHECK(P("3") == PolyPhase({3}));
  CHECK(P(P("1/2 - 3*s + 5/7*s^2").to_string()) == P("1/2 - 3*s + 5/7*s^2"));
  CHECK_THROWS_AS(P("s^"), ParseError);
  CHECK_THROWS_AS(P("x^2"), ParseError);
}

TEST_CASE("eval_deriv examples") {
  CHECK(eval_deriv(P("s^3"), 0.5, 2) == doctest::Approx(3.0));
  CHECK(eval_deriv(P("s^2"), 0.3, 3) == 0.0);
  CHECK(eval_deriv(P("2*s^3 + s"), 1.0, 1) == doctest::Approx(7.0));
  CHECK(P("s^3").derivative(5).degree() == 0);
  CHECK(P("s^5").derivative(2).degree() == 3);
}

TEST_CASE("certified root isolation") {
  // (s - 1/3)(s - 1/2)(s - 2/3)
  const PolyPhase p = PolyPhase({Rational(-1, 9), Rational(13, 18), Rational(-3, 2), 1});
  const CertifiedPoly cp(p.coeffs());
  const auto r = isolate_roots(cp, 0.0, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r[1] == 0.5);
  CHECK(r[2] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  // An exact dyadic root is reported exactly even without a sign change.
  const CertifiedPoly sq(std::vector<Rational>{Rational(1, 4), -1, 1});  // (s-1/2)^2
  const auto r2 = isolate_roots(sq, 0.0, 1.0);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == 0.5);
  // Sign decided exactly where double Horner cancels.
  const CertifiedPoly tiny(std::vector<Rational>{from_double(1e-30), 0, 0});
  CHECK(tiny.sign(0.0) == 1);
}

TEST_CASE("sup_abs_deriv examples") {
  CHECK(sup_abs_deriv(P("s^3"), Interval(0, 1), 2).value == doctest::Approx(6.0));
  const auto s = sup_abs_deriv(P("s^2 - s"), Interval(0, 1), 1);
  CHECK(s.value == doctest::Approx(1.0));
  const PolyPhase q = P("s^4 - s^2");
  const double grid = grid_sup(q, 0, 1, 2);
  const auto sq = sup_abs_deriv(q, Interval(0, 1), 2);
  CHECK(sq.value == doctest::Approx(10.0));
  CHECK(sq.value == doctest::Approx(grid).epsilon(1e-9));
  CHECK(sq.at == 1.0);
}

TEST_CASE("sup_abs_deriv agrees with a dense scan on random phases") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> c(6);
    for (auto& x : c) x = Rational(rng.uniform_int(-100, 100), 17);
    const PolyPhase phi(c);
    for (int order = 0; order <= 3; ++order) {
      const double exact = sup_abs_deriv(phi, Interval(0, 1), order).value;
      const double grid = grid_sup(phi, 0, 1, order, 20000);
      CHECK(exact >= grid * (1 - 1e-12));
      CHECK(exact <= grid * (1 + 1e-6) + 1e-12);
    }
  }
}

TEST_CASE("bad_set examples") {
  DdParams p{1, 10.0, 0.01};
  const BadSet b1 = bad_set(P("1/6*s^3"), Interval(0, 1), p);
  REQUIRE(b1.components.size() == 1);
  CHECK(b1.components[0].lo == 0.0);
  CHECK(b1.components[0].hi == doctest::Approx(0.02).epsilon(1e-10));
  CHECK(b1.measure() == doctest::Approx(0.02).epsilon(1e-10));

  p.sigma = 0.5 * std::pow(10.0, -1);
  CHECK(bad_set(P("s^2"), Interval(0, 1), p).components.empty());

  p.sigma = 0.01;
  const BadSet b3 = bad_set(P("1/6*s^3 - 1/4*s^2"), Interval(0, 1), p);
  REQUIRE(b3.components.size() == 1);
  CHECK(b3.threshold == doctest::Approx(0.015));
  CHECK(b3.components[0].lo == doctest::Approx(0.485).epsilon(1e-10));
  CHECK(b3.components[0].hi == doctest::Approx(0.515).epsilon(1e-10));
  CHECK(b3.measure() == doctest::Approx(0.03).epsilon(1e-9));

  CHECK_THROWS_AS(bad_set(P("s^3"), Interval(0, 1), DdParams{1, 10.0, 0.2}), PreconditionViolated);
}

TEST_CASE("bad_set components are maximal and classified correctly") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> c(6);
    for (auto& x : c) x = Rational(rng.uniform_int(-50, 50), 8);
    const PolyPhase phi(c);
    DdParams p{3, 12.0, 1.5e-5 * (1 + trial)};
    const Interval J(0.1 * rng.uniform(), 0.5 + 0.5 * rng.uniform());
    const BadSet b = bad_set(phi, J, p);
    const PolyPhase q = phi.derivative(2);
    for (const auto& comp : b.components) {
      CHECK(std::fabs(q.eval(comp.midpoint())) < b.threshold);
      if (comp.lo > J.lo) CHECK(std::fabs(q.eval(comp.lo - 1e-9)) >= b.threshold * (1 - 1e-6));
      if (comp.hi < J.hi) CHECK(std::fabs(q.eval(comp.hi + 1e-9)) >= b.threshold * (1 - 1e-6));
    }
    // Grid classification of J outside the components.
    for (int i = 0; i <= 2000; ++i) {
      const double s = J.lo + J.length() * i / 2000;
      bool in = false;
      for (const auto& comp : b.components) in = in || (comp.lo - 1e-9 <= s && s <= comp.hi + 1e-9);
      if (!in) CHECK(std::fabs(q.eval(s)) >= b.threshold * (1 - 1e-9));
    }
  }
}

TEST_CASE("Dd membership") {
  const double sigma = 1e-3;
  const std::vector<double> sig{sigma};
  const std::vector<Interval> Js{Interval(0, 1)};
  const auto rep = check_Dd_membership(P("s^3"), DdParams{1, 10.0, sigma}, sig, Js);
  CHECK(rep.passed());
  CHECK(rep.max_components == 1);
  CHECK(rep.max_measure_ratio == doctest::Approx(2.0).epsilon(1e-9));
  const auto lin = check_Dd_membership(P("3*s + 1"), DdParams{1, 10.0, sigma}, sig, Js);
  CHECK(lin.passed());
  CHECK(lin.max_measure_ratio == 0.0);
}

TEST_CASE("C_d calibration") {
  CHECK(analytic_Cd(1) == doctest::Approx(12.0));
  CHECK(analytic_Cd(3) == doctest::Approx(12.0));
  const auto cal = calibrate_Cd(3, 40, 10, 5);
  CHECK(cal.max_components <= 4);
  CHECK(cal.max_measure_ratio <= cal.analytic);
  CHECK(cal.recommended >= cal.analytic);
}

TEST_CASE("Markov coefficient bound") {
  // phi'' = 2s - 1
  auto m = markov_coeff_bound(P("1/3*s^3 - 1/2*s^2"));
  CHECK(m.lambda == 3.0);
  CHECK(m.within);
  // phi'' = 8s^2 - 8s + 1, the shifted Chebyshev polynomial
  m = markov_coeff_bound(P("2/3*s^4 - 4/3*s^3 + 1/2*s^2"));
  CHECK(m.lambda == 17.0);
  CHECK(m.Lambda == 17.0);
  CHECK(m.sup_phi2 == doctest::Approx(1.0));
  CHECK(m.within);
  m = markov_coeff_bound(P("1/2*s^2"));
  CHECK(m.lambda == 1.0);
  CHECK(markov_table_entry(3) == 99.0);
  CHECK(markov_table_entry(5) == 3363.0);
}

TEST_CASE("normalize_vertical") {
  auto n = normalize_vertical(P("2*s^2"));
  CHECK(n.factor == 4);
  CHECK(n.psi == P("1/2*s^2"));
  CHECK(n.exact);
  n = normalize_vertical(P("s^3"));
  CHECK(n.factor == 6);
  CHECK(n.psi == P("1/6*s^3"));
  n = normalize_vertical(P("s^3 - s^2"));
  CHECK(n.factor == 4);
  CHECK(sup_abs_deriv(n.psi, Interval(0, 1), 2).value == 1.0);
  CHECK_THROWS_AS(normalize_vertical(P("s + 1")), LinearPhaseError);
}

TEST_CASE("rescale_to_unit") {
  CHECK(rescale_to_unit(P("s^3"), 0, Rational(1, 2)) == P("1/4*s^3"));
  CHECK(rescale_to_unit(P("s^2"), 0, 1) == P("s^2"));
  CHECK(rescale_to_unit(P("s^2"), Rational(1, 2), 1) == P("1/2*s^2 + s + 1/2"));
  CHECK_THROWS_AS(rescale_to_unit(P("s^2"), 1, 1), PreconditionViolated);

  // Composition and the curvature bound on random data.
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> c(5);
    for (auto& x : c) x = Rational(rng.uniform_int(-20, 20), 3);
    const PolyPhase phi(c);
    const Rational a(rng.uniform_int(0, 40), 100), b(rng.uniform_int(60, 100), 100);
    const Rational u(rng.uniform_int(0, 30), 100), v(rng.uniform_int(50, 100), 100);
    const PolyPhase twice = rescale_to_unit(rescale_to_unit(phi, a, b), u, v);
    const PolyPhase direct = rescale_to_unit(phi, a + (b - a) * u, a + (b - a) * v);
    CHECK(twice == direct);
    const double s_psi = sup_abs_deriv(rescale_to_unit(phi, a, b), Interval(0, 1), 2).value;
    const double s_phi = sup_abs_deriv(phi, Interval(0, 1), 2).value;
    CHECK(s_psi <= s_phi * (1 + 1e-12));
  }
}

TEST_CASE("bad set covariance under rescaling") {
  Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> c(6);
    for (auto& x : c) x = Rational(rng.uniform_int(-64, 64), 16);
    const PolyPhase phi(c);
    const Rational alpha(1, 8), beta(7, 8);
    const PolyPhase psi = rescale_to_unit(phi, alpha, beta);
    const double k0 = 0.25 * rng.uniform(), k1 = 0.5 + 0.5 * rng.uniform();
    const DdParams p{3, 12.0, 1e-4};
    const BadSet bpsi = bad_set(psi, Interval(k0, k1), p);
    const double w = 0.75;
    const BadSet bphi = bad_set(phi, Interval(0.125 + w * k0, 0.125 + w * k1), p);
    REQUIRE(bpsi.components.size() == bphi.components.size());
    for (std::size_t i = 0; i < bpsi.components.size(); ++i) {
      CHECK(bpsi.components[i].lo == doctest::Approx((bphi.components[i].lo - 0.125) / w).epsilon(1e-9));
      CHECK(bpsi.components[i].hi == doctest::Approx((bphi.components[i].hi - 0.125) / w).epsilon(1e-9));
    }
  }
}

TEST_CASE("closure under c phi + a s + b") {
  Rng rng(23);
  std::vector<double> sig;
  std::vector<Interval> Js;
  for (int k = 0; k < 30; ++k) {
    sig.push_back(std::pow(12.0, -3) * std::exp(-10 * rng.uniform()));
    const double a = 0.5 * rng.uniform();
    Js.emplace_back(a, a + 0.5 * rng.uniform() + 1e-3);
  }
  const PolyPhase phi = P("s^5 - 2*s^4 + 1/3*s^3");
  const DdParams p{3, 12.0, 1e-4};
  CHECK(check_Dd_membership(phi, p, sig, Js).passed());
  for (const Rational c : {Rational(1), Rational(-1, 2), Rational(1, 7)}) {
    CHECK(check_Dd_membership(phi.scaled(c).plus_linear(3, -2), p, sig, Js).passed());
  }
}

TEST_CASE("taylor_quadratic") {
  CHECK(taylor_quadratic(P("s^3"), 0).is_zero());
  CHECK(taylor_quadratic(P("s^2"), Rational(3, 7)) == P("s^2"));
  auto t = taylor_remainder_check(P("s^3"), 0, 0.25);
  CHECK(t.sup_error == doctest::Approx(std::pow(0.25, 3)));
  CHECK(t.ok);
  t = taylor_remainder_check(P("s^3"), Rational(1, 2), 0.125);
  CHECK(t.sup_error == 1.0 / 512);
  CHECK(t.bound == 1.0 / 512);
  CHECK(t.ok);
  t = taylor_remainder_check(P("s^2"), Rational(1, 3), 0.1);
  CHECK(t.sup_error == 0.0);
}
