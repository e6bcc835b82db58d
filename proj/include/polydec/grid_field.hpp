#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polydec/interval.hpp"
#include "polydec/kernels/lattice.hpp"
#include "polydec/partition.hpp"
#include "polydec/poly_phase.hpp"

namespace polydec {

using cplx = std::complex<double>;

/// phi -> lambda phi + c s + d.
struct AffineNormalization {
  double lambda = 1.0;
  double shear_c = 0.0;
  double shift_d = 0.0;
};

/// Discretized extension operator: the integral over s is replaced by point
/// masses at s_k = k / Lx (weight 1 / Lx), which makes every field exactly
/// Lx-periodic in x and sampleable by one FFT per row.
struct LatticePlan {
  kernels::LatticeSpec spec;
  std::size_t period_nodes = 0;  // Lx; 0 for custom node sets
  std::vector<double> s;
  std::vector<std::int64_t> bin;
  std::vector<double> weight;
  std::vector<double> tau;  // phi(s_k) - carrier
  std::vector<std::size_t> cell;
  std::vector<std::size_t> nodes_per_cell;
  std::size_t underresolved_cells = 0;
  double carrier = 0.0;
  double y_half_width = 0.0;
  bool x_periodic = true;

  double box_x() const noexcept { return static_cast<double>(spec.nx) * spec.dx; }
  double box_y() const noexcept { return static_cast<double>(spec.ny) * spec.dy; }
};

/// Default box: Lx = the smallest power of two >= box_x / delta such that every
/// cell (except a trailing leftover cell shorter than half of every other
/// cell) holds nodes_per_cell nodes; Nx = 4 Lx with dx = 1/4;
/// Ly = box_y delta^{-1} max(1, 1/sup|phi''|); dy <= 1 / (4 h) where h is the
/// half-width of the carrier-centred y-frequency support; Ny a power of two.
LatticePlan natural_lattice(const PolyPhase& phase, const Partition& partition, double delta,
                            std::size_t nodes_per_cell, double box_x = 1.0, double box_y = 1.0);

/// Explicit node set on an explicit lattice. Each s_k dx nx must equal
/// bin_k (checked to 1e-9).
LatticePlan custom_lattice(const PolyPhase& phase, const Partition& partition,
                           const kernels::LatticeSpec& spec, std::vector<double> s,
                           std::vector<std::int64_t> bin, std::vector<double> weight,
                           bool x_periodic = true);

/// Same plan with ny multiplied by `factor` (same dy).
LatticePlan extend_y(const LatticePlan& plan, std::size_t factor);

/// Kernel nodes with amplitude weight_k e(x0 s_k) coeff_{cell(k)}.
kernels::LatticeNodes lattice_nodes(const LatticePlan& plan, std::span<const cplx> coeffs);

enum class Quadrature { lattice, gauss_legendre };

struct FreqMeta {
  PolyPhase phase;
  std::vector<Interval> cells;
  std::vector<cplx> coeffs;
  double thickness = 0.0;
};

struct GridField {
  kernels::LatticeSpec spec;
  std::vector<cplx> samples;  // row-major, samples[j * nx + i]
  FreqMeta meta;
  Quadrature quadrature = Quadrature::lattice;
  bool x_periodic = false;
  double oversampling = 1.0;       // Nyquist step / actual step (min over axes)
  double quadrature_error = 0.0;   // relative l2 change at the last refinement
  bool truncation_flagged = false; // produced by a lattice cutoff
  std::optional<LatticePlan> plan;  // synthesis recipe for exact truncation

  cplx at(std::size_t i, std::size_t j) const { return samples[j * spec.nx + i]; }
  double x(std::size_t i) const { return spec.x0 + static_cast<double>(i) * spec.dx; }
  double y(std::size_t j) const { return spec.y0 + static_cast<double>(j) * spec.dy; }
};

inline constexpr std::size_t kMaxMaterializedSamples = std::size_t{1} << 25;

/// Lattice-mode synthesis; samples include the carrier e(y t0).
GridField sample_extension(const PolyPhase& phase, const Partition& partition,
                           std::span<const cplx> coeffs, const LatticePlan& plan, double delta,
                           int threads = 0);

/// Gauss-Legendre synthesis of sum_I c_I int_I e(x s + y phi(s)) ds. Panels
/// per cell start at ceil(wavelengths) with 8 nodes each and double until the
/// field changes by less than rel_tol (relative l2).
/// Throws NyquistViolation when dx > 1 / (4 max|s|) or
/// dy > 1 / (4 max|t|) over t in [min phi - delta, max phi + delta], and
/// QuadratureBudgetExceeded when the refinement stalls above 1e-8.
GridField sample_extension_gl(const PolyPhase& phase, const Partition& partition,
                              std::span<const cplx> coeffs, const kernels::LatticeSpec& spec,
                              double delta, double rel_tol = 1e-9,
                              std::size_t max_work = std::size_t{1} << 31);

/// Gauss-Legendre value of sum_I c_I E_I 1 at one point, refined to rel_tol;
/// returns (value, last relative change).
std::pair<cplx, double> extension_at(const PolyPhase& phase, const Partition& partition,
                                     std::span<const cplx> coeffs, double x, double y,
                                     double rel_tol = 1e-12);

struct SubBox {
  double x_lo, x_hi, y_lo, y_hi;
};

/// Riemann-sum norm (sum dA |f|^p)^{1/p} over the lattice or the samples
/// whose coordinates lie in the sub-box.
double lp_norm(const GridField& field, double p, const std::optional<SubBox>& sub = std::nullopt);

/// Fourier truncation to cells inside I. Exact re-synthesis when I is a union
/// of cells of a synthesized field; otherwise a per-row lattice FFT cutoff of
/// the x-frequencies outside I, with truncation_flagged set.
GridField truncate(const GridField& field, const Interval& I);

/// Physical-side image of (s, t) -> (s, lambda t + c s + d):
/// G(x, y') = e(y' d) f(x + c y', lambda y') on the lattice y' = y / lambda.
/// Throws IncompatibleShear unless c y'_j / dx is an integer for every row
/// and, for c != 0, the field is x-periodic on its lattice.
GridField shear_transform(const GridField& field, const AffineNormalization& norm);

/// f(x, y) = sum_{j=1..N} e(x j / N + y j^2 / N^2) on [0, N] x [0, N^2] with
/// steps 1 / oversample in both axes (exact Riemann sums for p <= 6 at 4x).
struct ParabolaSum {
  kernels::LatticeSpec spec;
  kernels::LatticeNodes nodes;
};
ParabolaSum parabola_sum(std::size_t N, std::size_t oversample = 4);
/// (sum dA |f|^p)^{1/p} via the lattice kernel.
double parabola_lp_norm(std::size_t N, double p, std::size_t oversample = 4, int threads = 0);
GridField parabola_field(std::size_t N, std::size_t oversample = 4);

}  // namespace polydec
