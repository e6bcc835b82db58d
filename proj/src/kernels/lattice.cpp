#include "polydec/kernels/lattice.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "polydec/errors.hpp"

namespace polydec::kernels {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t wrap(std::int64_t b, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  std::int64_t r = b % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

struct FftwBuffer {
  fftw_complex* p = nullptr;
  explicit FftwBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw BudgetExceeded("fftw allocation failed");
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  cplx* data() { return reinterpret_cast<cplx*>(p); }
};

// Backward (e^{+2 pi i}) out-of-place plans, created once per length. Only
// planning is serialized; fftw_execute_dft on fresh aligned buffers is
// thread-safe.
fftw_plan backward_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  FftwBuffer in(n), out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in.p, out.p, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p) throw Error("fftw planning failed");
  plans.emplace(n, p);
  return p;
}

void validate(const LatticeSpec& spec, const LatticeNodes& nodes) {
  if (!is_pow2(spec.nx)) throw PreconditionViolated("lattice nx must be a power of two");
  if (spec.ny == 0) throw PreconditionViolated("lattice ny must be positive");
  if (nodes.tau.size() != nodes.size() || nodes.amp.size() != nodes.size())
    throw PreconditionViolated("lattice node arrays differ in length");
}

int thread_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// Streams rows [j0, j1) of one chunk through `sink(row_samples)`.
template <class Sink>
void run_chunk(const LatticeSpec& spec, const LatticeNodes& nodes, std::size_t nfft,
               std::size_t j0, std::size_t j1, fftw_plan plan, FftwBuffer& in, FftwBuffer& out,
               std::vector<cplx>& z, std::vector<cplx>& step, std::vector<std::size_t>& slot,
               Sink&& sink) {
  const std::size_t K = nodes.size();
  const double yj0 = spec.y0 + static_cast<double>(j0) * spec.dy;
  for (std::size_t k = 0; k < K; ++k) {
    z[k] = nodes.amp[k] * unit_phase(yj0 * nodes.tau[k]);
    step[k] = unit_phase(spec.dy * nodes.tau[k]);
  }
  cplx* a = in.data();
  for (std::size_t j = j0; j < j1; ++j) {
    std::fill(a, a + nfft, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
      a[slot[k]] += z[k];
      z[k] *= step[k];
    }
    fftw_execute_dft(plan, in.p, out.p);
    sink(j, out.data());
  }
}

std::vector<double> power_sums_fft(const LatticeSpec& spec, const LatticeNodes& nodes,
                                   std::span<const double> ps, std::size_t nfft, std::int64_t shift,
                                   int threads) {
  const std::size_t nchunks = (spec.ny + kChunkRows - 1) / kChunkRows;
  const std::size_t np = ps.size();
  std::vector<double> partial(nchunks * np, 0.0);
  const fftw_plan plan = backward_plan(nfft);
#pragma omp parallel num_threads(thread_count(threads))
  {
    FftwBuffer in(nfft), out(nfft);
    std::vector<cplx> z(nodes.size()), step(nodes.size());
    std::vector<std::size_t> slot(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) slot[k] = wrap(nodes.bin[k] - shift, nfft);
    std::vector<double> acc(np);
#pragma omp for schedule(dynamic, 1)
    for (long c = 0; c < static_cast<long>(nchunks); ++c) {
      const std::size_t j0 = static_cast<std::size_t>(c) * kChunkRows;
      const std::size_t j1 = std::min(spec.ny, j0 + kChunkRows);
      std::fill(acc.begin(), acc.end(), 0.0);
      run_chunk(spec, nodes, nfft, j0, j1, plan, in, out, z, step, slot,
                [&](std::size_t, const cplx* f) {
                  for (std::size_t q = 0; q < np; ++q) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < nfft; ++i) s += abs_pow(f[i], ps[q]);
                    acc[q] += s;
                  }
                });
      for (std::size_t q = 0; q < np; ++q) partial[static_cast<std::size_t>(c) * np + q] = acc[q];
    }
  }
  std::vector<double> total(np, 0.0);
  for (std::size_t c = 0; c < nchunks; ++c)
    for (std::size_t q = 0; q < np; ++q) total[q] += partial[c * np + q];
  return total;
}

}  // namespace

cplx unit_phase(double theta) noexcept {
  const double f = theta - std::nearbyint(theta);
  const double a = 2.0 * std::numbers::pi * f;
  return {std::cos(a), std::sin(a)};
}

std::vector<double> lattice_power_sums(const LatticeSpec& spec, const LatticeNodes& nodes,
                                       std::span<const double> ps, int threads) {
  validate(spec, nodes);
  return power_sums_fft(spec, nodes, ps, spec.nx, 0, threads);
}

std::vector<double> lattice_power_sums_narrow(const LatticeSpec& spec, const LatticeNodes& nodes,
                                              std::span<const double> ps, int threads) {
  validate(spec, nodes);
  if (nodes.size() == 0) return std::vector<double>(ps.size(), 0.0);
  bool even = true;
  double pmax = 0.0;
  for (double p : ps) {
    even = even && p > 0 && std::floor(p / 2) == p / 2;
    pmax = std::max(pmax, p);
  }
  const auto [lo, hi] = std::minmax_element(nodes.bin.begin(), nodes.bin.end());
  const auto span = static_cast<double>(*hi - *lo);
  std::size_t M = 1;
  while (static_cast<double>(M) <= 0.5 * pmax * span) M *= 2;
  if (!even || M >= spec.nx) return power_sums_fft(spec, nodes, ps, spec.nx, 0, threads);
  // Shifting bins by a constant multiplies each row by a unimodular factor.
  auto sums = power_sums_fft(spec, nodes, ps, M, *lo, threads);
  const double scale = static_cast<double>(spec.nx) / static_cast<double>(M);
  for (double& s : sums) s *= scale;
  return sums;
}

std::vector<double> lattice_power_sums_reference(const LatticeSpec& spec, const LatticeNodes& nodes,
                                                 std::span<const double> ps) {
  validate(spec, nodes);
  std::vector<double> total(ps.size(), 0.0);
  const auto samples = lattice_samples_reference(spec, nodes);
  for (std::size_t q = 0; q < ps.size(); ++q) {
    double s = 0.0;
    for (const cplx& f : samples) s += abs_pow(f, ps[q]);
    total[q] = s;
  }
  return total;
}

std::vector<cplx> lattice_samples(const LatticeSpec& spec, const LatticeNodes& nodes, int threads) {
  validate(spec, nodes);
  std::vector<cplx> out(spec.nx * spec.ny);
  const std::size_t nchunks = (spec.ny + kChunkRows - 1) / kChunkRows;
  const fftw_plan plan = backward_plan(spec.nx);
#pragma omp parallel num_threads(thread_count(threads))
  {
    FftwBuffer in(spec.nx), buf(spec.nx);
    std::vector<cplx> z(nodes.size()), step(nodes.size());
    std::vector<std::size_t> slot(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) slot[k] = wrap(nodes.bin[k], spec.nx);
#pragma omp for schedule(dynamic, 1)
    for (long c = 0; c < static_cast<long>(nchunks); ++c) {
      const std::size_t j0 = static_cast<std::size_t>(c) * kChunkRows;
      const std::size_t j1 = std::min(spec.ny, j0 + kChunkRows);
      run_chunk(spec, nodes, spec.nx, j0, j1, plan, in, buf, z, step, slot,
                [&](std::size_t j, const cplx* f) { std::copy(f, f + spec.nx, out.begin() + j * spec.nx); });
    }
  }
  return out;
}

std::vector<cplx> lattice_samples_reference(const LatticeSpec& spec, const LatticeNodes& nodes) {
  validate(spec, nodes);
  std::vector<cplx> out(spec.nx * spec.ny, cplx(0.0, 0.0));
  const double nx = static_cast<double>(spec.nx);
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double y = spec.y0 + static_cast<double>(j) * spec.dy;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const cplx a = nodes.amp[k] * unit_phase(y * nodes.tau[k]);
      const double b = static_cast<double>(nodes.bin[k]);
      for (std::size_t i = 0; i < spec.nx; ++i) {
        // i * b / nx reduced exactly: both are integers below 2^53.
        const double ib = std::fmod(static_cast<double>(i) * b, nx);
        out[j * spec.nx + i] += a * unit_phase(ib / nx);
      }
    }
  }
  return out;
}

}  // namespace polydec::kernels
