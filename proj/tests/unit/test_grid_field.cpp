#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "polydec/errors.hpp"
#include "polydec/grid_field.hpp"
#include "polydec/kernels/quadrature.hpp"
#include "polydec/rng.hpp"

using namespace polydec;

namespace {
PolyPhase P(std::string_view s) { return parse_phase(s); }

// Brute-force count of {a in [1,N]^k, b in [1,N]^k : sum a^i = sum b^i, i = 1, 2}.
double parabola_count(int N, int k) {
  std::vector<std::pair<long, long>> sums{{0, 0}};
  for (int step = 0; step < k; ++step) {
    std::vector<std::pair<long, long>> next;
    for (auto [a, b] : sums)
      for (int j = 1; j <= N; ++j) next.emplace_back(a + j, b + static_cast<long>(j) * j);
    sums.swap(next);
  }
  std::sort(sums.begin(), sums.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t j = i;
    while (j < sums.size() && sums[j] == sums[i]) ++j;
    total += static_cast<double>((j - i) * (j - i));
    i = j;
  }
  return total;
}
}  // namespace

TEST_CASE("lattice kernel agrees with direct summation") {
  Rng rng(7);
  const kernels::LatticeSpec spec{64, 0.25, 0.0, 300, 0.37, -5.0};
  kernels::LatticeNodes nodes;
  for (int k = 0; k < 9; ++k) {
    nodes.bin.push_back(rng.uniform_int(0, 15));
    nodes.tau.push_back(rng.uniform(-3, 3));
    nodes.amp.emplace_back(rng.normal(), rng.normal());
  }
  const auto fast = kernels::lattice_samples(spec, nodes);
  const auto ref = kernels::lattice_samples_reference(spec, nodes);
  double err = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast[i] - ref[i]));
  CHECK(err < 1e-10);
  const double ps[] = {2.0, 3.0, 4.0, 6.0};
  const auto a = kernels::lattice_power_sums(spec, nodes, ps);
  const auto b = kernels::lattice_power_sums_reference(spec, nodes, ps);
  const auto c = kernels::lattice_power_sums_narrow(spec, nodes, ps);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    CHECK(c[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }
}

TEST_CASE("parabola sum norms are exact counts") {
  for (int N : {4, 8, 16}) {
    const double n = N;
    CHECK(std::pow(parabola_lp_norm(N, 2), 2) == doctest::Approx(n * n * n * n).epsilon(1e-10));
    CHECK(std::pow(parabola_lp_norm(N, 4), 4) ==
          doctest::Approx(n * n * n * (2 * n * n - n)).epsilon(1e-10));
  }
  for (int N : {2, 4, 8}) {
    const double n = N;
    CHECK(std::pow(parabola_lp_norm(N, 6), 6) ==
          doctest::Approx(n * n * n * parabola_count(N, 3)).epsilon(1e-10));
  }
  const GridField f = parabola_field(8);
  CHECK(std::pow(lp_norm(f, 4), 4) == doctest::Approx(512.0 * 120.0).epsilon(1e-10));
}

TEST_CASE("natural lattice layout") {
  const PolyPhase phi = P("s^2");
  const Partition G = greedy_admissible(phi, Interval(0, 1), 1.0 / 64, PMode::exact);
  const LatticePlan plan = natural_lattice(phi, G, 1.0 / 64, 4);
  CHECK(plan.spec.dx == 0.25);
  CHECK(plan.spec.nx == 4 * plan.period_nodes);
  CHECK(plan.period_nodes >= 64);
  CHECK(plan.spec.dy <= 1.0 / (4.0 * plan.y_half_width) + 1e-15);
  CHECK(plan.box_y() == doctest::Approx(64.0));  // sup phi'' = 2 > 1
  for (std::size_t i = 0; i + 1 < G.size(); ++i) CHECK(plan.nodes_per_cell[i] >= 4);
  CHECK(plan.carrier == doctest::Approx(0.5 * (plan.s.back() * plan.s.back())));
  CHECK_THROWS_AS(natural_lattice(phi, G, 1.0 / 64, 3), PreconditionViolated);
}

TEST_CASE("gauss-legendre extension point values") {
  const Partition T = Partition::trivial(Interval(0, 1), 0.0);
  const std::vector<cplx> one{cplx(1, 0)};
  auto [v0, e0] = extension_at(P("s^2"), T, one, 0.0, 0.0);
  CHECK(std::abs(v0 - cplx(1, 0)) < 1e-12);
  const double x = 0.3;
  const cplx expect = (std::exp(cplx(0, 2 * std::numbers::pi * x)) - 1.0) / cplx(0, 2 * std::numbers::pi * x);
  auto [v1, e1] = extension_at(P("s^3"), T, one, x, 0.0);
  CHECK(std::abs(v1 - expect) < 1e-12);
  // Fresnel-type value by a dense midpoint rule.
  cplx ref = 0.0;
  const int M = 200000;
  for (int i = 0; i < M; ++i) {
    const double s = (i + 0.5) / M;
    ref += kernels::unit_phase(2.0 * s + 7.0 * s * s) / static_cast<double>(M);
  }
  auto [v2, e2] = extension_at(P("s^2"), T, one, 2.0, 7.0);
  CHECK(std::abs(v2 - ref) < 1e-8);
}

TEST_CASE("gauss-legendre field and nyquist guard") {
  const PolyPhase phi = P("s^2");
  const Partition U = Partition::uniform(Interval(0, 1), 4, 1.0 / 32);
  const std::vector<cplx> c{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0.5, 0.5)};
  const kernels::LatticeSpec spec{16, 0.25, -2.0, 16, 0.2, -1.6};
  const GridField f = sample_extension_gl(phi, U, c, spec, 1.0 / 32);
  CHECK(f.quadrature_error < 1e-8);
  for (std::size_t j = 0; j < 16; j += 5)
    for (std::size_t i = 0; i < 16; i += 3) {
      auto [v, e] = extension_at(phi, U, c, f.x(i), f.y(j));
      CHECK(std::abs(v - f.at(i, j)) < 1e-8);
    }
  const kernels::LatticeSpec coarse{16, 0.3, 0.0, 16, 0.2, 0.0};
  CHECK_THROWS_AS(sample_extension_gl(phi, U, c, coarse, 1.0 / 32), NyquistViolation);
  const kernels::LatticeSpec coarse_y{16, 0.25, 0.0, 16, 0.3, 0.0};
  CHECK_THROWS_AS(sample_extension_gl(phi, U, c, coarse_y, 1.0 / 32), NyquistViolation);
}

TEST_CASE("lattice field approximates the continuous extension") {
  const PolyPhase phi = P("s^2");
  const Partition T = Partition::trivial(Interval(0, 1), 1.0 / 16);
  const std::vector<cplx> one{cplx(1, 0)};
  const kernels::LatticeSpec spec{16384, 0.25, 0.0, 1, 0.25, 0.7};
  std::vector<double> s, w;
  std::vector<std::int64_t> bin;
  for (int k = 0; k < 4096; ++k) {
    s.push_back(k / 4096.0);
    bin.push_back(k);
    w.push_back(1.0 / 4096);
  }
  const LatticePlan plan = custom_lattice(phi, T, spec, s, bin, w);
  const GridField f = sample_extension(phi, T, one, plan, 1.0 / 16);
  auto [v, e] = extension_at(phi, T, one, f.x(1), f.y(0));
  CHECK(std::abs(f.at(1, 0) - v) < 1e-3);
}

TEST_CASE("shear transform matches direct synthesis of the new phase") {
  const PolyPhase phi = P("s^2 - 1/3*s^3");
  const Partition U = Partition::uniform(Interval(0, 1), 4, 1.0 / 64);
  const LatticePlan plan = natural_lattice(phi, U, 1.0 / 64, 4);
  const std::vector<cplx> c{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0.5, -0.5)};
  const GridField f = sample_extension(phi, U, c, plan, 1.0 / 64);
  const double dyp = f.spec.dy;  // lambda = 1 keeps the y lattice
  const AffineNormalization norm{1.0, 3.0 * f.spec.dx / dyp, 0.25};
  const GridField g = shear_transform(f, norm);
  CHECK(lp_norm(g, 4) == doctest::Approx(lp_norm(f, 4)).epsilon(1e-12));

  kernels::QuadNodes q;
  const PolyPhase psi = g.meta.phase;
  for (std::size_t k = 0; k < plan.s.size(); ++k) {
    q.s.push_back(plan.s[k]);
    q.t.push_back(psi.eval(plan.s[k]));
    q.w.push_back(plan.weight[k] * c[plan.cell[k]]);
  }
  kernels::LatticeSpec small = g.spec;
  small.ny = 40;
  const auto ref = kernels::direct_sum_serial(small, q);
  double err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) err = std::max(err, std::abs(ref[i] - g.samples[i]));
  CHECK(err < 1e-9);

  const GridField h = shear_transform(f, AffineNormalization{2.0, 0.0, 0.0});
  CHECK(std::pow(lp_norm(h, 6), 6) == doctest::Approx(std::pow(lp_norm(f, 6), 6) / 2.0).epsilon(1e-12));
  CHECK(h.meta.thickness == 2.0 / 64);
  CHECK_THROWS_AS(shear_transform(f, AffineNormalization{1.0, 0.1234567, 0.0}), IncompatibleShear);
}

TEST_CASE("truncation") {
  const PolyPhase phi = P("s^2");
  const Partition U = Partition::uniform(Interval(0, 1), 4, 1.0 / 64);
  const LatticePlan plan = natural_lattice(phi, U, 1.0 / 64, 4);
  const std::vector<cplx> c{cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)};
  const GridField f = sample_extension(phi, U, c, plan, 1.0 / 64);
  const GridField t = truncate(f, Interval(0.25, 0.75));
  CHECK_FALSE(t.truncation_flagged);
  const std::vector<cplx> c2{cplx(0, 0), cplx(2, 0), cplx(3, 0), cplx(0, 0)};
  const GridField g = sample_extension(phi, U, c2, plan, 1.0 / 64);
  double err = 0.0;
  for (std::size_t i = 0; i < g.samples.size(); ++i) err = std::max(err, std::abs(g.samples[i] - t.samples[i]));
  CHECK(err < 1e-12);

  // A cutoff that does not align with the cells: lattice nodes sit exactly on
  // frequency bins, so the FFT cutoff equals dropping the nodes above 0.3.
  const GridField cut = truncate(f, Interval(0.0, 0.3));
  CHECK(cut.truncation_flagged);
  kernels::LatticeNodes nodes = lattice_nodes(plan, c);
  double err2 = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (plan.s[k] >= 0.3) nodes.amp[k] = 0.0;
  const auto ref = kernels::lattice_samples(plan.spec, nodes);
  for (std::size_t j = 0; j < f.spec.ny; ++j) {
    const cplx car = kernels::unit_phase(f.y(j) * plan.carrier);
    for (std::size_t i = 0; i < f.spec.nx; ++i)
      err2 = std::max(err2, std::abs(ref[j * f.spec.nx + i] * car - cut.at(i, j)));
  }
  CHECK(err2 < 1e-10);
}
