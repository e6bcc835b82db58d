// Kernel timings: fast lattice sums against the direct reference, and the
// OpenMP kernels against their serial twins.

#include <benchmark/benchmark.h>

#include <vector>

#include "polydec/kernels/lattice.hpp"
#include "polydec/kernels/minkowski_scan.hpp"
#include "polydec/kernels/quadrature.hpp"
#include "polydec/rng.hpp"

using namespace polydec;
using namespace polydec::kernels;

namespace {

LatticeNodes make_nodes(std::size_t nx, std::size_t count) {
  Rng rng(1);
  LatticeNodes n;
  for (std::size_t k = 0; k < count; ++k) {
    n.bin.push_back(static_cast<std::int64_t>(k * (nx / 4) / count));
    const double s = static_cast<double>(k) / static_cast<double>(count);
    n.tau.push_back(s * s);
    n.amp.push_back(unit_phase(rng.uniform()));
  }
  return n;
}

const double kPs[] = {4.0, 6.0};

void BM_lattice_fft(benchmark::State& st) {
  const std::size_t nx = static_cast<std::size_t>(st.range(0));
  const LatticeSpec spec{nx, 0.25, 0.0, nx, 0.25, -0.125 * static_cast<double>(nx)};
  const LatticeNodes nodes = make_nodes(nx, nx / 4);
  for (auto _ : st) benchmark::DoNotOptimize(lattice_power_sums(spec, nodes, kPs, 1));
}

void BM_lattice_narrow(benchmark::State& st) {
  const std::size_t nx = static_cast<std::size_t>(st.range(0));
  const LatticeSpec spec{nx, 0.25, 0.0, nx, 0.25, -0.125 * static_cast<double>(nx)};
  const LatticeNodes nodes = make_nodes(nx, nx / 4);
  for (auto _ : st) benchmark::DoNotOptimize(lattice_power_sums_narrow(spec, nodes, kPs, 1));
}

void BM_lattice_reference(benchmark::State& st) {
  const std::size_t nx = static_cast<std::size_t>(st.range(0));
  const LatticeSpec spec{nx, 0.25, 0.0, nx, 0.25, -0.125 * static_cast<double>(nx)};
  const LatticeNodes nodes = make_nodes(nx, nx / 4);
  for (auto _ : st) benchmark::DoNotOptimize(lattice_power_sums_reference(spec, nodes, kPs));
}

QuadNodes make_quad(std::size_t count) {
  QuadNodes q;
  std::vector<double> w;
  append_gauss_legendre(0.0, 1.0, static_cast<int>(count / 8), q.s, w);
  for (std::size_t i = 0; i < q.s.size(); ++i) {
    q.t.push_back(q.s[i] * q.s[i] * q.s[i]);
    q.w.emplace_back(w[i], 0.0);
  }
  return q;
}

void BM_direct_serial(benchmark::State& st) {
  const LatticeSpec spec{64, 0.5, -16.0, 64, 0.5, -16.0};
  const QuadNodes q = make_quad(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(direct_sum_serial(spec, q));
}

void BM_direct_omp(benchmark::State& st) {
  const LatticeSpec spec{64, 0.5, -16.0, 64, 0.5, -16.0};
  const QuadNodes q = make_quad(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(direct_sum_omp(spec, q));
}

MinkowskiGrid grid(std::size_t n) { return MinkowskiGrid{3, 0.25, 0.5, 1.0 / 256, n, n}; }

void BM_minkowski_serial(benchmark::State& st) {
  const MinkowskiGrid g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(minkowski_grid_max_serial(g));
}

void BM_minkowski_omp(benchmark::State& st) {
  const MinkowskiGrid g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(minkowski_grid_max_omp(g));
}

}  // namespace

BENCHMARK(BM_lattice_fft)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_lattice_narrow)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_lattice_reference)->Arg(64)->Arg(256);
BENCHMARK(BM_direct_serial)->Arg(64)->Arg(512);
BENCHMARK(BM_direct_omp)->Arg(64)->Arg(512);
BENCHMARK(BM_minkowski_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_minkowski_omp)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
