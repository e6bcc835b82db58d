#include "polydec/kernels/minkowski_scan.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace polydec::kernels {

namespace {

double ipow(double x, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= x;
  return r;
}

double row_max(const MinkowskiGrid& g, std::size_t i) {
  const double s = g.s_lo + (g.s_hi - g.s_lo) * static_cast<double>(i) / static_cast<double>(g.ns - 1);
  const double sd = ipow(s, g.d);
  double m = 0.0;
  for (std::size_t j = 0; j < g.nu; ++j) {
    const double u = -g.u_max + 2.0 * g.u_max * static_cast<double>(j) / static_cast<double>(g.nu - 1);
    m = std::max(m, std::fabs(ipow(s + u, g.d) - sd));
  }
  return m;
}

}  // namespace

double minkowski_grid_max_serial(const MinkowskiGrid& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.ns; ++i) m = std::max(m, row_max(g, i));
  return m;
}

double minkowski_grid_max_omp(const MinkowskiGrid& g) {
  std::vector<double> rows(g.ns);
  const auto n = static_cast<long>(g.ns);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = row_max(g, static_cast<std::size_t>(i));
  double m = 0.0;
  for (double r : rows) m = std::max(m, r);
  return m;
}

}  // namespace polydec::kernels
