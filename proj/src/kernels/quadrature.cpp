#include "polydec/kernels/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace polydec::kernels {

namespace {

cplx sample(const QuadNodes& nodes, double x, double y) {
  cplx acc(0.0, 0.0);
  for (std::size_t n = 0; n < nodes.s.size(); ++n)
    acc += nodes.w[n] * unit_phase(x * nodes.s[n] + y * nodes.t[n]);
  return acc;
}

}  // namespace

std::vector<cplx> direct_sum_serial(const LatticeSpec& spec, const QuadNodes& nodes) {
  std::vector<cplx> out(spec.nx * spec.ny);
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double y = spec.y0 + static_cast<double>(j) * spec.dy;
    for (std::size_t i = 0; i < spec.nx; ++i)
      out[j * spec.nx + i] = sample(nodes, spec.x0 + static_cast<double>(i) * spec.dx, y);
  }
  return out;
}

std::vector<cplx> direct_sum_omp(const LatticeSpec& spec, const QuadNodes& nodes) {
  std::vector<cplx> out(spec.nx * spec.ny);
  const long ny = static_cast<long>(spec.ny);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < ny; ++j) {
    const double y = spec.y0 + static_cast<double>(j) * spec.dy;
    for (std::size_t i = 0; i < spec.nx; ++i)
      out[static_cast<std::size_t>(j) * spec.nx + i] =
          sample(nodes, spec.x0 + static_cast<double>(i) * spec.dx, y);
  }
  return out;
}

void append_gauss_legendre(double a, double b, int panels, std::vector<double>& s,
                           std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, 8>;
  const auto& x = rule::abscissa();
  const auto& wt = rule::weights();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      s.push_back(mid - half * x[k]);
      w.push_back(half * wt[k]);
      s.push_back(mid + half * x[k]);
      w.push_back(half * wt[k]);
    }
  }
}

}  // namespace polydec::kernels
