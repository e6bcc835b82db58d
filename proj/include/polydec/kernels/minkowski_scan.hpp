#pragma once

#include <cstddef>

namespace polydec::kernels {

/// Grid over s in [s_lo, s_hi] and u in [-u_max, u_max] of
/// |(s + u)^d - s^d|. Returns the grid maximum.
struct MinkowskiGrid {
  int d = 3;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double u_max = 0.0;
  std::size_t ns = 512;  // points per axis, >= 2
  std::size_t nu = 512;
};

double minkowski_grid_max_serial(const MinkowskiGrid& g);
/// OpenMP version; per-row maxima are combined in row order, so the result
/// equals the serial one exactly.
double minkowski_grid_max_omp(const MinkowskiGrid& g);

}  // namespace polydec::kernels
