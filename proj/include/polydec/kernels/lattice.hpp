#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace polydec::kernels {

using cplx = std::complex<double>;

/// x_i = x0 + i dx (i < nx), y_j = y0 + j dy (j < ny); nx a power of two.
struct LatticeSpec {
  std::size_t nx = 0;
  double dx = 0.0;
  double x0 = 0.0;
  std::size_t ny = 0;
  double dy = 0.0;
  double y0 = 0.0;

  double cell_area() const noexcept { return dx * dy; }
};

/// Point masses of a field f(x_i, y_j) = sum_k amp_k e(i bin_k / nx) e(y_j tau_k).
/// The x0 phase e(x0 s_k) is expected to be folded into amp by the caller.
struct LatticeNodes {
  std::vector<std::int64_t> bin;
  std::vector<double> tau;
  std::vector<cplx> amp;

  std::size_t size() const noexcept { return bin.size(); }
};

/// e(theta) = exp(2 pi i theta) with theta reduced mod 1 first.
cplx unit_phase(double theta) noexcept;

/// sum_{i,j} |f(x_i, y_j)|^p for each p, by one inverse FFT per row.
/// Rows are processed in chunks of kChunkRows whose partial sums are added in
/// chunk order, so the result does not depend on the thread count.
/// threads <= 0 uses the OpenMP default; 1 runs serially.
std::vector<double> lattice_power_sums(const LatticeSpec& spec, const LatticeNodes& nodes,
                                       std::span<const double> ps, int threads = 0);

/// Same sums when every bin lies in a window much narrower than nx: for even
/// integer p, |f|^p restricted to a row is a trigonometric polynomial of
/// degree < M, so M equispaced samples give the exact row sum (times nx/M).
/// Falls back to lattice_power_sums otherwise.
std::vector<double> lattice_power_sums_narrow(const LatticeSpec& spec, const LatticeNodes& nodes,
                                              std::span<const double> ps, int threads = 0);

/// Serial direct summation (no FFT, no recurrences); the reference the fast
/// kernels are tested against.
std::vector<double> lattice_power_sums_reference(const LatticeSpec& spec, const LatticeNodes& nodes,
                                                 std::span<const double> ps);

/// Row-major samples f[j * nx + i].
std::vector<cplx> lattice_samples(const LatticeSpec& spec, const LatticeNodes& nodes,
                                  int threads = 0);
std::vector<cplx> lattice_samples_reference(const LatticeSpec& spec, const LatticeNodes& nodes);

inline constexpr std::size_t kChunkRows = 256;

/// |z|^p with integer fast paths.
inline double abs_pow(cplx z, double p) noexcept {
  const double a2 = z.real() * z.real() + z.imag() * z.imag();
  if (p == 2.0) return a2;
  if (p == 4.0) return a2 * a2;
  if (p == 6.0) return a2 * a2 * a2;
  if (p == 8.0) return (a2 * a2) * (a2 * a2);
  return std::pow(a2, 0.5 * p);
}

}  // namespace polydec::kernels
