#include "polydec/grid_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydec/errors.hpp"
#include "polydec/kernels/quadrature.hpp"
#include "polydec/phase_analysis.hpp"

namespace polydec {

namespace {

std::size_t next_pow2(double x) {
  std::size_t n = 1;
  while (static_cast<double>(n) < x) {
    n *= 2;
    if (n > (std::size_t{1} << 40)) throw BudgetExceeded("lattice size overflow");
  }
  return n;
}

std::size_t cell_of(const Partition& P, double s) {
  const auto it = std::upper_bound(P.cuts.begin(), P.cuts.end(), s);
  const auto idx = static_cast<std::size_t>(it - P.cuts.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, P.size() - 1);
}

// Carrier-centred y-frequencies of the plan.
void finish_plan(LatticePlan& plan, const PolyPhase& phase, const Partition& P) {
  plan.cell.resize(plan.s.size());
  plan.tau.resize(plan.s.size());
  plan.nodes_per_cell.assign(P.size(), 0);
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = -tmin;
  for (std::size_t k = 0; k < plan.s.size(); ++k) {
    plan.cell[k] = cell_of(P, plan.s[k]);
    ++plan.nodes_per_cell[plan.cell[k]];
    plan.tau[k] = phase.eval(plan.s[k]);
    tmin = std::min(tmin, plan.tau[k]);
    tmax = std::max(tmax, plan.tau[k]);
  }
  if (plan.s.empty()) tmin = tmax = 0.0;
  plan.carrier = 0.5 * (tmin + tmax);
  plan.y_half_width = 0.5 * (tmax - tmin);
  for (double& t : plan.tau) t -= plan.carrier;
}

}  // namespace

LatticePlan natural_lattice(const PolyPhase& phase, const Partition& partition, double delta,
                            std::size_t nodes_per_cell, double box_x, double box_y) {
  partition.validate();
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionViolated("lattice needs 0 < delta <= 1");
  if (nodes_per_cell < 4) throw PreconditionViolated("TrialSpec needs >= 4 nodes per cell");
  if (partition.base.lo < 0.0 || partition.base.hi > 1.0)
    throw PreconditionViolated("lattice nodes live in [0, 1]");
  const std::size_t n = partition.size();
  std::vector<double> len(n);
  for (std::size_t i = 0; i < n; ++i) len[i] = partition.cell(i).length();
  bool leftover = false;
  if (n > 1) {
    const double others = *std::min_element(len.begin(), len.end() - 1);
    leftover = len.back() < 0.5 * others;
  }

  std::size_t Lx = next_pow2(box_x / delta);
  LatticePlan plan;
  while (true) {
    plan.s.clear();
    plan.bin.clear();
    for (std::size_t k = 0; k < Lx; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(Lx);
      if (s < partition.base.lo || s > partition.base.hi) continue;
      plan.s.push_back(s);
      plan.bin.push_back(static_cast<std::int64_t>(k));
    }
    std::vector<std::size_t> count(n, 0);
    for (double s : plan.s) ++count[cell_of(partition, s)];
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (leftover && i + 1 == n) continue;
      ok = ok && count[i] >= nodes_per_cell;
    }
    if (ok) break;
    Lx *= 2;
    if (Lx > (std::size_t{1} << 20)) throw BudgetExceeded("cells too short to resolve on the x lattice");
  }
  plan.period_nodes = Lx;
  plan.weight.assign(plan.s.size(), 1.0 / static_cast<double>(Lx));
  finish_plan(plan, phase, partition);
  for (std::size_t c : plan.nodes_per_cell)
    if (c < nodes_per_cell) ++plan.underresolved_cells;

  const double M = phase.is_linear() ? 0.0 : sup_abs_deriv(phase, partition.base, 2).value;
  const double Ly = box_y / delta * (M > 0.0 ? std::max(1.0, 1.0 / M) : 1.0);
  std::size_t Ny = 4;
  if (plan.y_half_width > 0.0) {
    const double dy_max = 1.0 / (4.0 * plan.y_half_width);
    Ny = std::max<std::size_t>(4, next_pow2(Ly / dy_max));
  }
  plan.spec = kernels::LatticeSpec{4 * Lx, 0.25, 0.0, Ny, Ly / static_cast<double>(Ny), 0.0};
  if (static_cast<double>(plan.spec.nx) * static_cast<double>(plan.spec.ny) > 0x1.0p31)
    throw BudgetExceeded("lattice above 2^31 samples");
  plan.x_periodic = true;
  return plan;
}

LatticePlan custom_lattice(const PolyPhase& phase, const Partition& partition,
                           const kernels::LatticeSpec& spec, std::vector<double> s,
                           std::vector<std::int64_t> bin, std::vector<double> weight, bool x_periodic) {
  partition.validate();
  if (s.size() != bin.size() || s.size() != weight.size())
    throw PreconditionViolated("custom lattice arrays differ in length");
  LatticePlan plan;
  plan.spec = spec;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!partition.base.contains(s[k])) throw PreconditionViolated("custom lattice node outside the base");
    const double b = s[k] * spec.dx * static_cast<double>(spec.nx);
    if (std::fabs(b - static_cast<double>(bin[k])) > 1e-9 * std::max(1.0, std::fabs(b)))
      throw PreconditionViolated("custom lattice node is not on its frequency bin");
  }
  plan.s = std::move(s);
  plan.bin = std::move(bin);
  plan.weight = std::move(weight);
  plan.x_periodic = x_periodic;
  finish_plan(plan, phase, partition);
  return plan;
}

LatticePlan extend_y(const LatticePlan& plan, std::size_t factor) {
  LatticePlan out = plan;
  out.spec.ny *= factor;
  return out;
}

kernels::LatticeNodes lattice_nodes(const LatticePlan& plan, std::span<const cplx> coeffs) {
  if (coeffs.size() != plan.nodes_per_cell.size())
    throw PreconditionViolated("one coefficient per cell required");
  kernels::LatticeNodes nodes;
  const std::size_t K = plan.s.size();
  nodes.bin = plan.bin;
  nodes.tau = plan.tau;
  nodes.amp.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const cplx shift = plan.spec.x0 == 0.0 ? cplx(1.0, 0.0) : kernels::unit_phase(plan.spec.x0 * plan.s[k]);
    nodes.amp[k] = plan.weight[k] * shift * coeffs[plan.cell[k]];
  }
  return nodes;
}

namespace {

FreqMeta make_meta(const PolyPhase& phase, const Partition& P, std::span<const cplx> coeffs,
                   double delta) {
  return FreqMeta{phase, P.cells(), std::vector<cplx>(coeffs.begin(), coeffs.end()), delta};
}

void check_budget(const kernels::LatticeSpec& spec) {
  if (static_cast<double>(spec.nx) * static_cast<double>(spec.ny) > static_cast<double>(kMaxMaterializedSamples))
    throw BudgetExceeded("materialized field above 2^25 samples; use the streaming norms");
}

}  // namespace

GridField sample_extension(const PolyPhase& phase, const Partition& partition,
                           std::span<const cplx> coeffs, const LatticePlan& plan, double delta,
                           int threads) {
  check_budget(plan.spec);
  GridField f;
  f.spec = plan.spec;
  f.samples = kernels::lattice_samples(plan.spec, lattice_nodes(plan, coeffs), threads);
  if (plan.carrier != 0.0) {
    for (std::size_t j = 0; j < f.spec.ny; ++j) {
      const cplx c = kernels::unit_phase(f.y(j) * plan.carrier);
      for (std::size_t i = 0; i < f.spec.nx; ++i) f.samples[j * f.spec.nx + i] *= c;
    }
  }
  f.meta = make_meta(phase, partition, coeffs, delta);
  f.quadrature = Quadrature::lattice;
  f.x_periodic = plan.x_periodic;
  const double ox = 1.0 / (plan.spec.dx * std::max(1e-300, partition.base.length()));
  const double oy = plan.y_half_width > 0.0 ? 1.0 / (plan.spec.dy * 2.0 * plan.y_half_width) : ox;
  f.oversampling = std::min(ox, oy);
  f.plan = plan;
  return f;
}

namespace {

// Quadrature nodes for all cells at the given panel multiplier.
kernels::QuadNodes gl_nodes(const PolyPhase& phase, const Partition& P, std::span<const cplx> coeffs,
                            const std::vector<int>& panels, int mult) {
  kernels::QuadNodes q;
  std::vector<double> s, w;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (coeffs[i] == cplx(0.0, 0.0)) continue;
    s.clear();
    w.clear();
    const Interval I = P.cell(i);
    kernels::append_gauss_legendre(I.lo, I.hi, panels[i] * mult, s, w);
    for (std::size_t n = 0; n < s.size(); ++n) {
      q.s.push_back(s[n]);
      q.t.push_back(phase.eval(s[n]));
      q.w.push_back(w[n] * coeffs[i]);
    }
  }
  return q;
}

std::vector<int> base_panels(const PolyPhase& phase, const Partition& P, double xmax, double ymax) {
  std::vector<int> panels(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Interval I = P.cell(i);
    const double osc = I.length() * sup_abs_deriv(phase, I, 1).value;
    const double waves = xmax * I.length() + ymax * osc;
    panels[i] = std::max(1, static_cast<int>(std::ceil(waves)));
  }
  return panels;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

}  // namespace

GridField sample_extension_gl(const PolyPhase& phase, const Partition& partition,
                              std::span<const cplx> coeffs, const kernels::LatticeSpec& spec,
                              double delta, double rel_tol, std::size_t max_work) {
  partition.validate();
  check_budget(spec);
  if (coeffs.size() != partition.size()) throw PreconditionViolated("one coefficient per cell required");
  const double smax = std::max(std::fabs(partition.base.lo), std::fabs(partition.base.hi));
  const SupResult hi = sup_abs_deriv(phase, partition.base, 0);
  // max |t| over [min phi - delta, max phi + delta] is at most sup|phi| + delta.
  const double tmax = hi.value + delta;
  if (smax > 0.0 && spec.dx > 1.0 / (4.0 * smax))
    throw NyquistViolation("x step exceeds 1 / (4 max|s|)");
  if (tmax > 0.0 && spec.dy > 1.0 / (4.0 * tmax))
    throw NyquistViolation("y step exceeds 1 / (4 max|t|)");

  const double xmax = std::max(std::fabs(spec.x0), std::fabs(spec.x0 + spec.dx * (spec.nx - 1)));
  const double ymax = std::max(std::fabs(spec.y0), std::fabs(spec.y0 + spec.dy * (spec.ny - 1)));
  const std::vector<int> panels = base_panels(phase, partition, xmax, ymax);
  const std::size_t samples = spec.nx * spec.ny;

  int mult = 1;
  auto nodes = gl_nodes(phase, partition, coeffs, panels, mult);
  std::vector<cplx> cur = kernels::direct_sum_omp(spec, nodes);
  double err = std::numeric_limits<double>::infinity();
  while (true) {
    const auto finer = gl_nodes(phase, partition, coeffs, panels, 2 * mult);
    if (static_cast<double>(finer.s.size()) * static_cast<double>(samples) > static_cast<double>(max_work)) break;
    std::vector<cplx> next = kernels::direct_sum_omp(spec, finer);
    err = rel_l2(cur, next);
    cur = std::move(next);
    mult *= 2;
    if (err < rel_tol) break;
  }
  if (!(err <= 1e-8)) throw QuadratureBudgetExceeded("Gauss-Legendre refinement did not converge", err);

  GridField f;
  f.spec = spec;
  f.samples = std::move(cur);
  f.meta = make_meta(phase, partition, coeffs, delta);
  f.quadrature = Quadrature::gauss_legendre;
  f.x_periodic = false;
  f.quadrature_error = err;
  const double ox = smax > 0.0 ? 1.0 / (4.0 * smax * spec.dx) : 1.0;
  const double oy = tmax > 0.0 ? 1.0 / (4.0 * tmax * spec.dy) : ox;
  f.oversampling = std::min(ox, oy);
  return f;
}

std::pair<cplx, double> extension_at(const PolyPhase& phase, const Partition& partition,
                                     std::span<const cplx> coeffs, double x, double y, double rel_tol) {
  const std::vector<int> panels = base_panels(phase, partition, std::fabs(x), std::fabs(y));
  const kernels::LatticeSpec one{1, 1.0, x, 1, 1.0, y};
  int mult = 1;
  cplx cur = kernels::direct_sum_serial(one, gl_nodes(phase, partition, coeffs, panels, mult))[0];
  double err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 20; ++it) {
    mult *= 2;
    const cplx next = kernels::direct_sum_serial(one, gl_nodes(phase, partition, coeffs, panels, mult))[0];
    err = std::abs(next - cur) / std::max(std::abs(next), 1e-300);
    cur = next;
    if (err < rel_tol || std::abs(next) == 0.0) break;
  }
  return {cur, err};
}

double lp_norm(const GridField& field, double p, const std::optional<SubBox>& sub) {
  if (!(p >= 1.0)) throw PreconditionViolated("lp_norm needs p >= 1");
  double s = 0.0;
  for (std::size_t j = 0; j < field.spec.ny; ++j) {
    const double y = field.y(j);
    if (sub && (y < sub->y_lo || y > sub->y_hi)) continue;
    for (std::size_t i = 0; i < field.spec.nx; ++i) {
      if (sub) {
        const double x = field.x(i);
        if (x < sub->x_lo || x > sub->x_hi) continue;
      }
      s += kernels::abs_pow(field.samples[j * field.spec.nx + i], p);
    }
  }
  return std::pow(field.spec.cell_area() * s, 1.0 / p);
}

namespace {

bool is_cut(const std::vector<Interval>& cells, double v) {
  const double tol = 1e-12;
  if (std::fabs(v - cells.front().lo) <= tol) return true;
  for (const auto& c : cells)
    if (std::fabs(v - c.hi) <= tol) return true;
  return false;
}

Partition partition_from_cells(const std::vector<Interval>& cells, double r) {
  std::vector<double> cuts{cells.front().lo};
  for (const auto& c : cells) cuts.push_back(c.hi);
  return Partition(Interval(cuts.front(), cuts.back()), cuts, r);
}

}  // namespace

GridField truncate(const GridField& field, const Interval& I) {
  const auto& cells = field.meta.cells;
  if (!cells.empty() && is_cut(cells, I.lo) && is_cut(cells, I.hi) &&
      (field.plan || field.quadrature == Quadrature::gauss_legendre)) {
    std::vector<cplx> c = field.meta.coeffs;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!(cells[i].lo >= I.lo - 1e-12 && cells[i].hi <= I.hi + 1e-12)) c[i] = cplx(0.0, 0.0);
    }
    const Partition P = partition_from_cells(cells, field.meta.thickness);
    if (field.plan) return sample_extension(field.meta.phase, P, c, *field.plan, field.meta.thickness);
    return sample_extension_gl(field.meta.phase, P, c, field.spec, field.meta.thickness);
  }
  // Sharp lattice cutoff of the x-frequencies outside [I.lo, I.hi).
  GridField out = field;
  out.plan.reset();
  out.truncation_flagged = true;
  const std::size_t nx = field.spec.nx;
  fftw_complex* buf = fftw_alloc_complex(nx);
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(nx), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(nx), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  auto* z = reinterpret_cast<cplx*>(buf);
  const double period = static_cast<double>(nx) * field.spec.dx;
  for (std::size_t j = 0; j < field.spec.ny; ++j) {
    std::copy(field.samples.begin() + j * nx, field.samples.begin() + (j + 1) * nx, z);
    fftw_execute(fwd);
    for (std::size_t b = 0; b < nx; ++b) {
      const double signed_b = b < nx / 2 ? static_cast<double>(b) : static_cast<double>(b) - static_cast<double>(nx);
      const double s = signed_b / period;
      if (!(s >= I.lo && s < I.hi)) z[b] = 0.0;
    }
    fftw_execute(bwd);
    for (std::size_t i = 0; i < nx; ++i) out.samples[j * nx + i] = z[i] / static_cast<double>(nx);
  }
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return out;
}

GridField shear_transform(const GridField& field, const AffineNormalization& norm) {
  if (!(norm.lambda > 0.0)) throw PreconditionViolated("shear_transform needs lambda > 0");
  const std::size_t nx = field.spec.nx;
  GridField out = field;
  out.plan.reset();
  out.spec.dy = field.spec.dy / norm.lambda;
  out.spec.y0 = field.spec.y0 / norm.lambda;
  if (norm.shear_c != 0.0 && !field.x_periodic)
    throw IncompatibleShear("shear with c != 0 needs an x-periodic field");
  for (std::size_t j = 0; j < field.spec.ny; ++j) {
    const double yp = out.y(j);
    const double shift = norm.shear_c * yp / field.spec.dx;
    const double rs = std::nearbyint(shift);
    if (std::fabs(shift - rs) > 1e-9 * std::max(1.0, std::fabs(shift)))
      throw IncompatibleShear("c y' / dx is not an integer on row " + std::to_string(j));
    const auto m = static_cast<std::int64_t>(nx);
    std::int64_t sh = static_cast<std::int64_t>(rs) % m;
    if (sh < 0) sh += m;
    const cplx mod = norm.shift_d == 0.0 ? cplx(1.0, 0.0) : kernels::unit_phase(yp * norm.shift_d);
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t src = (i + static_cast<std::size_t>(sh)) % nx;
      out.samples[j * nx + i] = mod * field.samples[j * nx + src];
    }
  }
  out.meta.phase = field.meta.phase.scaled(from_double(norm.lambda))
                       .plus_linear(from_double(norm.shear_c), from_double(norm.shift_d));
  out.meta.thickness = field.meta.thickness * norm.lambda;
  return out;
}

ParabolaSum parabola_sum(std::size_t N, std::size_t oversample) {
  if (N == 0 || oversample == 0) throw PreconditionViolated("parabola sum needs N, oversample >= 1");
  ParabolaSum ps;
  const double q = static_cast<double>(oversample);
  ps.spec = kernels::LatticeSpec{oversample * N, 1.0 / q, 0.0, oversample * N * N, 1.0 / q, 0.0};
  const double n2 = static_cast<double>(N) * static_cast<double>(N);
  for (std::size_t j = 1; j <= N; ++j) {
    ps.nodes.bin.push_back(static_cast<std::int64_t>(j));
    ps.nodes.tau.push_back(static_cast<double>(j * j) / n2);
    ps.nodes.amp.emplace_back(1.0, 0.0);
  }
  return ps;
}

double parabola_lp_norm(std::size_t N, double p, std::size_t oversample, int threads) {
  const ParabolaSum ps = parabola_sum(N, oversample);
  const double ps_arr[1] = {p};
  const auto s = kernels::lattice_power_sums(ps.spec, ps.nodes, ps_arr, threads);
  return std::pow(ps.spec.cell_area() * s[0], 1.0 / p);
}

GridField parabola_field(std::size_t N, std::size_t oversample) {
  const ParabolaSum ps = parabola_sum(N, oversample);
  check_budget(ps.spec);
  GridField f;
  f.spec = ps.spec;
  f.samples = kernels::lattice_samples(ps.spec, ps.nodes);
  f.x_periodic = true;
  f.oversampling = static_cast<double>(oversample);
  f.meta.phase = PolyPhase(std::vector<Rational>{Rational(0), Rational(0), Rational(1)});
  return f;
}

}  // namespace polydec
