// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and budgets
// are fixed here; a criterion that misses its time budget fails.
//
//   acceptance [--only 1,3,7] [--archive DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polydec/bootstrap.hpp"
#include "polydec/decoupling.hpp"
#include "polydec/errors.hpp"
#include "polydec/grid_field.hpp"
#include "polydec/io/json_io.hpp"
#include "polydec/mean_value.hpp"
#include "polydec/neighborhood.hpp"
#include "polydec/partition.hpp"
#include "polydec/phase_analysis.hpp"
#include "polydec/rng.hpp"

using namespace polydec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path archive;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Rational dyadic(double x, int bits = 20) { return from_double(std::ldexp(std::round(std::ldexp(x, bits)), -bits)); }

// Random phase with 2 <= degree <= max_degree and sup_[0,1] |phi''| rescaled
// into [lo, hi] (from below, so the upper bound holds exactly).
PolyPhase random_phase(Rng& rng, int max_degree, double lo, double hi) {
  for (;;) {
    const int deg = static_cast<int>(rng.uniform_int(2, max_degree));
    std::vector<Rational> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = dyadic(rng.uniform(-1.0, 1.0), 12);
    if (c.back() == 0) continue;
    const PolyPhase phi(c);
    const double M = sup_abs_deriv(phi, Interval(0, 1), 2).value;
    if (!(M > 1e-6)) continue;
    const double target = rng.uniform(lo, hi);
    const double f = std::ldexp(std::floor(std::ldexp(target / M, 30)), -30);
    const PolyPhase psi = phi.scaled(from_double(f));
    const double Mp = sup_abs_deriv(psi, Interval(0, 1), 2).value;
    if (Mp <= hi && Mp > 0.0) return psi;
  }
}

// ---------------------------------------------------------------------------

Outcome criterion1(const Context&) {
  const PolyPhase phi = parse_phase("s^2");
  int bad = 0;
  for (int k = 2; k <= 12; ++k) {
    const Rational delta = pow(Rational(1, 4), k);
    const Partition P = canonical_partition(delta);
    if (!is_admissible(phi, P, to_double(delta), PMode::taylor)) ++bad;
  }
  return {bad == 0, fmt("k=2..12, %d non-admissible", bad)};
}

// Greedy cut for s^3 with tangent at the right end: h^2 (a + 2 b) = 2 delta.
double next_cut(double a, double delta, bool tangent_right) {
  auto g = [&](double b) {
    const double h = b - a;
    return h * h * (tangent_right ? a + 2 * b : b + 2 * a) - 2 * delta;
  };
  double lo = a, hi = a + 1.0;
  while (g(hi) < 0) hi = a + 2 * (hi - a);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double m = 0.5 * (lo + hi);
    (g(m) < 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

Outcome criterion2(const Context&) {
  const double delta = std::ldexp(1.0, -24);
  const Partition G = greedy_admissible(parse_phase("s^3"), Interval(0, 1), delta, PMode::exact);
  const std::size_t n = G.size();
  const double limit = std::cbrt(1.5);
  std::vector<double> oracle{0.0}, stated{0.0};
  while (oracle.back() < 1.0) oracle.push_back(next_cut(oracle.back(), delta, true));
  while (stated.back() < 1.0) stated.push_back(next_cut(stated.back(), delta, false));
  double worst = 0.0, worst_stated = 0.0, oracle_gap = 0.0;
  std::size_t checked = 0;
  const std::size_t jmax = static_cast<std::size_t>(0.9 * static_cast<double>(n));
  for (std::size_t j = 20; j <= jmax; ++j) {
    const double scale = std::pow(static_cast<double>(j), 2.0 / 3.0) * std::cbrt(delta);
    worst = std::max(worst, std::fabs(G.cuts[j] / scale / limit - 1.0));
    if (j < stated.size()) worst_stated = std::max(worst_stated, std::fabs(stated[j] / scale / limit - 1.0));
    if (j < oracle.size()) oracle_gap = std::max(oracle_gap, std::fabs(G.cuts[j] / oracle[j] - 1.0));
    ++checked;
  }
  const bool count_ok = oracle.size() - 1 == n;
  const bool pass = checked > 0 && worst <= 0.05 && worst_stated <= 0.05 && oracle_gap <= 1e-9 && count_ok;
  return {pass, fmt("cells=%zu, j=20..%zu, max rel dev %.4f (recursion oracle %.4f), greedy vs oracle %.1e",
                    n, jmax, worst, worst_stated, oracle_gap)};
}

Outcome criterion3(const Context&) {
  Rng rng(20240301);
  std::size_t runs = 0, count_viol = 0, pair_viol = 0, coarsen_viol = 0;
  for (int i = 0; i < 200; ++i) {
    const PolyPhase phi = random_phase(rng, 6, 0.05, 1.0);
    const double M = sup_abs_deriv(phi, Interval(0, 1), 2).value;
    for (int k = 6; k <= 16; ++k) {
      const double delta = std::ldexp(1.0, -k);
      const Partition G = greedy_admissible(phi, Interval(0, 1), delta, PMode::exact);
      ++runs;
      if (!count_bound(G, phi, delta)) ++count_viol;
      const double n = static_cast<double>(G.size());
      if (n > std::sqrt(M / delta) + 1.0) ++count_viol;
      const double lb = 2.0 * std::sqrt(delta / M);
      for (std::size_t c = 0; c + 1 < G.size(); ++c)
        if (G.cuts[c + 2] - G.cuts[c] < lb * (1 - 1e-12)) ++pair_viol;
      try {
        coarsen_pairs(G, phi, delta);
      } catch (const InvariantBreach&) {
        ++coarsen_viol;
      }
    }
  }
  const bool pass = count_viol == 0 && pair_viol == 0 && coarsen_viol == 0;
  return {pass, fmt("%zu partitions, count violations %zu, pair violations %zu, coarsen breaches %zu", runs,
                    count_viol, pair_viol, coarsen_viol)};
}

Outcome criterion4(const Context&) {
  const int d = 3;  // deg phi <= 5
  const CdCalibration cal = calibrate_Cd(d, 200, 20, 77);
  const double Cd = cal.recommended;
  Rng rng(4242);
  std::size_t checked = 0, viol = 0, max_comp = 0;
  double max_ratio = 0.0;
  const double sigma_max = std::pow(Cd, -d);
  for (int i = 0; i < 1000; ++i) {
    const int deg = static_cast<int>(rng.uniform_int(2, 5));
    std::vector<Rational> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = dyadic(rng.uniform(-4.0, 4.0), 10);
    if (c.back() == 0) c.back() = 1;
    const PolyPhase phi(c);
    std::vector<double> sig;
    std::vector<Interval> Js;
    for (int q = 0; q < 20; ++q) {
      sig.push_back(sigma_max * std::pow(10.0, -6.0 * rng.uniform()) * 0.999);
      const double a = rng.uniform(), b = rng.uniform();
      Js.emplace_back(std::min(a, b), std::max(a, b) + 1e-3);
    }
    const MembershipReport r = check_Dd_membership(phi, DdParams{d, Cd, sig.front()}, sig, Js);
    checked += r.checked;
    viol += r.violations.size();
    max_comp = std::max(max_comp, r.max_components);
    max_ratio = std::max(max_ratio, r.max_measure_ratio);
  }
  if (static_cast<double>(max_comp) > Cd) ++viol;

  // Closed-form examples.
  double err = 0.0;
  DdParams p{1, 10.0, 0.01};
  const BadSet b1 = bad_set(parse_phase("1/6*s^3"), Interval(0, 1), p);
  bool shapes = b1.components.size() == 1;
  if (shapes) err = std::max({err, std::fabs(b1.components[0].lo), std::fabs(b1.components[0].hi - 0.02)});
  p.sigma = 0.05;
  shapes = shapes && bad_set(parse_phase("s^2"), Interval(0, 1), p).components.empty();
  p.sigma = 0.01;
  const BadSet b3 = bad_set(parse_phase("1/6*s^3 - 1/4*s^2"), Interval(0, 1), p);
  shapes = shapes && b3.components.size() == 1;
  if (shapes)
    err = std::max({err, std::fabs(b3.components[0].lo - 0.485), std::fabs(b3.components[0].hi - 0.515)});
  const bool pass = viol == 0 && shapes && err <= 1e-10;
  return {pass, fmt("C_d=%.3g (analytic %.3g), %zu pairs, violations %zu, max comps %zu, max |B|/(s^(1/d)|J|) "
                    "%.3g, examples err %.1e",
                    Cd, cal.analytic, checked, viol, max_comp, max_ratio, err)};
}

Outcome criterion5(const Context&) {
  Rng rng(55);
  double worst = 0.0;
  std::size_t trials = 0;
  const double ps[] = {2.0};
  for (int i = 0; i < 50; ++i) {
    const PolyPhase phi = random_phase(rng, 5, 0.5, 2.0);
    const double delta = std::ldexp(1.0, -static_cast<int>(rng.uniform_int(6, 10)));
    const int kind = static_cast<int>(rng.uniform_int(0, 2));
    Partition P;
    DecouplingOptions o;
    if (kind == 0) {
      P = greedy_admissible(phi, Interval(0, 1), delta, PMode::exact);
    } else if (kind == 1) {
      P = greedy_admissible(phi, Interval(0, 1), delta, PMode::taylor);
      o.mode = PMode::taylor;
    } else {
      P = Partition::uniform(Interval(0, 1), static_cast<std::size_t>(rng.uniform_int(2, 40)), delta);
      o.check_sub_admissible = false;
    }
    const auto model = static_cast<CoeffModel>(rng.uniform_int(0, 2));
    const auto rep = decoupling_ratios(phi, P, ps, delta, TrialSpec{model}, 4, rng.bits(), o);
    for (double r : rep[0].ratios) worst = std::max(worst, std::fabs(r - 1.0));
    trials += rep[0].ratios.size();
  }
  return {worst <= 1e-6, fmt("50 configs, %zu trials, max |ratio-1| %.2e", trials, worst)};
}

Outcome criterion6(const Context&) {
  double worst = 0.0;
  bool counts = true;
  for (int N : {8, 16, 32}) {
    const double n = N;
    const double expect = n * n * n * (2 * n * n - n);
    const double got = std::pow(lp_norm(parabola_field(static_cast<std::size_t>(N)), 4.0), 4.0);
    worst = std::max(worst, std::fabs(got / expect - 1.0));
    // Brute force over all quadruples.
    std::map<std::pair<int, int>, std::uint64_t> mult;
    for (int a = 1; a <= N; ++a)
      for (int b = 1; b <= N; ++b) ++mult[{a + b, a * a + b * b}];
    std::uint64_t brute = 0;
    for (const auto& [key, m] : mult) brute += m * m;
    const std::uint64_t closed = static_cast<std::uint64_t>(2 * N * N - N);
    counts = counts && mean_value_count(N, 2, 2) == brute && brute == closed;
  }
  return {worst <= 0.005 && counts, fmt("N=8,16,32, max rel err %.2e, counts exact %s", worst, counts ? "yes" : "no")};
}

Outcome criterion7(const Context& ctx) {
  const double ps[] = {4.0, 6.0};
  const TrialSpec trial{CoeffModel::unimodular};
  const std::uint64_t seed = 7007;
  DecouplingOptions o;
  o.periodization_check = true;
  std::vector<double> inv;
  for (int k = 4; k <= 12; ++k) inv.push_back(std::ldexp(1.0, k));
  struct Series {
    std::string name;
    std::vector<double> max, max2;
  };
  std::vector<Series> series;
  std::vector<DecouplingReport> all;
  for (const char* ph : {"s^2", "s^3"}) {
    const PolyPhase phi = parse_phase(ph);
    Series s4{fmt("%s p=4", ph), {}, {}}, s6{fmt("%s p=6", ph), {}, {}};
    for (int k = 4; k <= 12; ++k) {
      const double delta = std::ldexp(1.0, -k);
      Partition P;
      if (std::string(ph) == "s^2") {
        // delta^{1/2} cells; odd k uses (2 delta)^{1/2} so the cells tile [0, 1].
        P = (k % 2 == 0) ? canonical_partition(pow(Rational(1, 2), k))
                         : Partition::uniform(Interval(0, 1), std::size_t{1} << ((k - 1) / 2), delta);
        o.partition_id = k % 2 == 0 ? "canonical" : "uniform-sqrt2delta";
      } else {
        P = greedy_admissible(phi, Interval(0, 1), delta, PMode::exact);
        o.partition_id = "greedy";
      }
      o.phase_id = ph;
      const auto rep = decoupling_ratios(phi, P, ps, delta, trial, 64, seed, o);
      s4.max.push_back(rep[0].max_ratio);
      s4.max2.push_back(rep[0].max_ratio_2x);
      s6.max.push_back(rep[1].max_ratio);
      s6.max2.push_back(rep[1].max_ratio_2x);
      all.insert(all.end(), rep.begin(), rep.end());
    }
    series.push_back(std::move(s4));
    series.push_back(std::move(s6));
  }
  if (!ctx.archive.empty()) std::ofstream(ctx.archive / "growth.csv") << estimate_csv(all);
  bool pass = true;
  std::string detail;
  for (const auto& s : series) {
    const double slope = loglog_slope(inv, s.max);
    const double slope2 = loglog_slope(inv, s.max2);
    pass = pass && slope <= 0.10;
    detail += fmt("%s slope %.3f (2x box %.3f); ", s.name.c_str(), slope, slope2);
  }
  detail.pop_back();
  detail.pop_back();
  return {pass, detail};
}

Outcome criterion8(const Context&) {
  Rng rng(8888);
  double shear_worst = 0.0, rescale_worst = 0.0;
  std::size_t configs = 0;
  const double lambdas[] = {0.5, 1.0, 2.0, 4.0, 0.25};
  for (int i = 0; i < 10; ++i, ++configs) {
    const PolyPhase phi = random_phase(rng, 5, 0.5, 2.0);
    const double delta = std::ldexp(1.0, -static_cast<int>(rng.uniform_int(6, 9)));
    const Partition G = greedy_admissible(phi, Interval(0, 1), delta, PMode::exact);
    const DecouplingProblem prob = make_problem(phi, G, delta, {4.0, 6.0}, TrialSpec{});
    const double dx = prob.plan().spec.dx, dy = prob.plan().spec.dy;
    const double lambda = lambdas[i % 5];
    const double c = static_cast<double>(rng.uniform_int(-4, 4)) * dx * lambda / dy;
    const AffineNormalization norm{lambda, c, rng.uniform(-1.0, 1.0)};
    const DecouplingProblem sh = sheared_problem(prob, norm);
    for (std::uint64_t t = 0; t < 8; ++t) {
      Rng cr(derive_seed(800 + static_cast<std::uint64_t>(i), t));
      const auto coeffs = draw_coefficients(CoeffModel::unimodular, G.size(), cr);
      const auto a = prob.ratios(coeffs), b = sh.ratios(coeffs);
      for (std::size_t q = 0; q < a.size(); ++q) shear_worst = std::max(shear_worst, std::fabs(a[q] - b[q]) / a[q]);
    }
  }
  for (int i = 0; i < 10; ++i, ++configs) {
    const PolyPhase phi = random_phase(rng, 5, 0.5, 2.0);
    const int m = static_cast<int>(rng.uniform_int(4, 6));
    const std::size_t cells = std::size_t{1} << m;
    const double delta = std::ldexp(1.0, -2 * m);
    const Partition U = Partition::uniform(Interval(0, 1), cells, delta);
    const DecouplingProblem prob = make_problem(phi, U, delta, {4.0, 6.0}, TrialSpec{});
    const std::size_t first = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cells) - 4));
    const std::size_t last = first + static_cast<std::size_t>(rng.uniform_int(
                                         2, static_cast<std::int64_t>(std::min<std::size_t>(cells - first, 16))));
    const DecouplingProblem sub = restrict_cells(prob, first, last);
    const DecouplingProblem unit = rescaled_problem(sub);
    for (std::uint64_t t = 0; t < 8; ++t) {
      Rng cr(derive_seed(900 + static_cast<std::uint64_t>(i), t));
      const auto coeffs = draw_coefficients(CoeffModel::gaussian, last - first, cr);
      const auto a = sub.ratios(coeffs), b = unit.ratios(coeffs);
      for (std::size_t q = 0; q < a.size(); ++q)
        rescale_worst = std::max(rescale_worst, std::fabs(a[q] - b[q]) / a[q]);
    }
  }
  const double rescale_tol = 1e-9;
  const bool pass = shear_worst <= 1e-8 && rescale_worst <= rescale_tol;
  return {pass, fmt("%zu configs x 8 trials, shear max rel %.2e (tol 1e-8), rescale max rel %.2e (tol %.0e)",
                    configs, shear_worst, rescale_worst, rescale_tol)};
}

Outcome criterion9(const Context&) {
  int bad = 0;
  const Rational K(2), eps(1, 2), C(1);
  for (int k = 2; k <= 32; ++k) {
    const Rational delta = pow(Rational(1, 4), k);
    const RecursionTrace t = unroll_main(K, eps, C, delta);
    // 36^n >= 4^k with n minimal.
    int n = 0;
    while (pow(Rational(36), n) * delta < 1) ++n;
    const Rational a = pow(K, n);
    const Rational b = Rational(3) * K / 2 * (1 - pow(Rational(1, 3), n));
    if (t.M != 36 || t.n != n || t.bound_a != a || t.bound_b != b || t.power_coeff != pow(Rational(6), n) ||
        t.stepwise_b != Rational(n) * a || t.closed_form_coeff != 6 ||
        static_cast<int>(t.steps.size()) != n + 1)
      ++bad;
    // Exponent chain e -> 2 floor(e / 3), clamped at 2.
    std::vector<int> chain{2 * k};
    while (chain.back() > 2) chain.push_back(std::max(2, 2 * (chain.back() / 3)));
    const RecursionTrace z = iterate_nonzero(delta);
    bool same = z.steps.size() == chain.size() && z.n == static_cast<int>(chain.size()) - 1;
    for (std::size_t i = 0; same && i < chain.size(); ++i) same = z.steps[i].scale == pow(Rational(1, 2), chain[i]);
    if (!same) ++bad;
    if (geometric_exponent_sum(z.n) != 3 * (1 - pow(Rational(2, 3), z.n))) ++bad;
  }
  const RecursionTrace c16 = iterate_nonzero(pow(Rational(2), -16));
  const int expect[] = {16, 10, 6, 4, 2};
  bool chain_ok = c16.steps.size() == 5;
  for (std::size_t i = 0; chain_ok && i < 5; ++i) chain_ok = c16.steps[i].scale == pow(Rational(2), -expect[i]);
  return {bad == 0 && chain_ok, fmt("k=2..32, %d mismatches, 2^-16 chain %s", bad, chain_ok ? "exact" : "wrong")};
}

Outcome criterion10(const Context& ctx) {
  const int d = 3;
  const double C = d * 8.0;
  std::size_t blocks = 0, failed = 0, sub_yes = 0, overlap_sets = 0;
  Json archive = Json::array();
  for (int k : {6, 8, 10}) {
    const Rational delta = pow(Rational(1, 2), k);
    const double dv = to_double(delta);
    const DualRect dual(dv, std::pow(dv, 0.5 * d));
    const DyadicDecomposition dec = dyadic_blocks(delta, d);
    for (const DyadicBlock& b : dec.blocks) {
      ++blocks;
      const MinkowskiReport m = minkowski_contained(d, delta, b.n, C);
      if (!m.contained) ++failed;
      neighbor_truncation_overlap(b.cells, dual);  // throws on a non-adjacent overlap
      ++overlap_sets;
      if (b.sub_admissible) ++sub_yes;
      archive.push_back({{"delta", to_string(delta)},
                         {"n", b.n},
                         {"a_n", to_string(b.a_n)},
                         {"cells", b.cells.size()},
                         {"sub_admissible", b.sub_admissible},
                         {"min_union_ratio", b.min_union_ratio},
                         {"contained", m.contained}});
    }
    const OverlapReport ov = neighbor_truncation_overlap(canonical_partition(delta), dual);
    ++overlap_sets;
    if (!ov.adjacent_only) ++failed;
  }
  if (!ctx.archive.empty()) std::ofstream(ctx.archive / "block_subadmissibility.json") << archive.dump(2) << "\n";
  return {failed == 0, fmt("d=3, C=24, %zu blocks, %zu failures, %zu partitions adjacency-checked; "
                           "sub-admissible blocks %zu/%zu (reported only)",
                           blocks, failed, overlap_sets, sub_yes, blocks)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> only;
  std::string archive = "acceptance_artifacts";
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--archive", archive, "directory for archived artifacts");
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  if (!archive.empty()) {
    ctx.archive = archive;
    fs::create_directories(ctx.archive);
  }
  const std::vector<Criterion> all = {
      {1, "canonical admissibility", 1.0, criterion1},
      {2, "greedy s^3 asymptotics", 5.0, criterion2},
      {3, "partition count and pair length", 60.0, criterion3},
      {4, "bad-set bounds", 120.0, criterion4},
      {5, "plancherel", 60.0, criterion5},
      {6, "mean-value oracle", 120.0, criterion6},
      {7, "sub-polynomial growth", 1800.0, criterion7},
      {8, "shear and rescaling invariance", 600.0, criterion8},
      {9, "bootstrap algebra", 1.0, criterion9},
      {10, "appendix geometry", 60.0, criterion10},
  };
  const std::set<int> want(only.begin(), only.end());
  int failures = 0;
  for (const Criterion& c : all) {
    if (!want.empty() && !want.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(ctx);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d [%s]: %s (%s; %.2f s of %.0f s%s)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
