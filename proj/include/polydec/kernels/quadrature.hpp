#pragma once

#include <complex>
#include <vector>

#include "polydec/kernels/lattice.hpp"

namespace polydec::kernels {

/// Weighted point masses (s_n, t_n, w_n): F(x, y) = sum_n w_n e(x s_n + y t_n).
struct QuadNodes {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<cplx> w;
};

/// F on the lattice, row-major, by direct summation.
std::vector<cplx> direct_sum_serial(const LatticeSpec& spec, const QuadNodes& nodes);
/// OpenMP over rows; each sample is the same ordered sum as the serial one.
std::vector<cplx> direct_sum_omp(const LatticeSpec& spec, const QuadNodes& nodes);

/// Composite Gauss-Legendre rule with `panels` equal panels of 8 nodes on
/// [a, b]; appends to (s, w).
void append_gauss_legendre(double a, double b, int panels, std::vector<double>& s,
                           std::vector<double>& w);

}  // namespace polydec::kernels
