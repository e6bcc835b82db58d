#include "polydec/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polydec/errors.hpp"

namespace polydec {

std::string to_string(CoeffModel m) {
  switch (m) {
    case CoeffModel::unimodular: return "unimodular";
    case CoeffModel::gaussian: return "gaussian";
    case CoeffModel::ones: return "ones";
  }
  return "unimodular";
}

CoeffModel parse_coeff_model(std::string_view s) {
  if (s == "unimodular" || s == "unimodular-random") return CoeffModel::unimodular;
  if (s == "gaussian" || s == "gaussian-random") return CoeffModel::gaussian;
  if (s == "ones" || s == "all-ones") return CoeffModel::ones;
  throw ParseError("unknown coefficient model: " + std::string(s));
}

void TrialSpec::validate() const {
  if (nodes_per_cell < 4) throw PreconditionViolated("TrialSpec needs >= 4 nodes per cell");
  if (!(box_x > 0.0) || !(box_y > 0.0)) throw PreconditionViolated("box multipliers must be positive");
}

std::vector<cplx> draw_coefficients(CoeffModel model, std::size_t n, Rng& rng) {
  std::vector<cplx> c(n);
  for (auto& z : c) {
    switch (model) {
      case CoeffModel::unimodular: z = kernels::unit_phase(rng.uniform()); break;
      case CoeffModel::gaussian: {
        const double re = rng.normal();
        const double im = rng.normal();
        z = cplx(re, im) / std::numbers::sqrt2;
        break;
      }
      case CoeffModel::ones: z = cplx(1.0, 0.0); break;
    }
  }
  return c;
}

DecouplingProblem::DecouplingProblem(PolyPhase phase, Partition partition, double delta,
                                     std::vector<double> ps, LatticePlan plan, int threads)
    : phase_(std::move(phase)), partition_(std::move(partition)), delta_(delta), ps_(std::move(ps)),
      plan_(std::move(plan)), threads_(threads) {
  for (double p : ps_)
    if (!(p >= 1.0)) throw PreconditionViolated("p must be >= 1");
  const std::size_t n = partition_.size();
  if (plan_.nodes_per_cell.size() != n) throw PreconditionViolated("plan and partition disagree");
  cell_sums_.resize(n);
  const std::vector<cplx> unit(n, cplx(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) cell_sums_[i] = group_sums(unit, i, i + 1);
}

std::vector<double> DecouplingProblem::group_sums(std::span<const cplx> coeffs, std::size_t lo,
                                                  std::size_t hi) const {
  const kernels::LatticeNodes all = lattice_nodes(plan_, coeffs);
  kernels::LatticeNodes sub;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (plan_.cell[k] < lo || plan_.cell[k] >= hi) continue;
    sub.bin.push_back(all.bin[k]);
    sub.tau.push_back(all.tau[k]);
    sub.amp.push_back(all.amp[k]);
  }
  if (sub.size() == 0) return std::vector<double>(ps_.size(), 0.0);
  return kernels::lattice_power_sums_narrow(plan_.spec, sub, ps_, threads_);
}

std::vector<double> DecouplingProblem::lhs_sums(std::span<const cplx> coeffs) const {
  return kernels::lattice_power_sums(plan_.spec, lattice_nodes(plan_, coeffs), ps_, threads_);
}

namespace {
double ratio_of(double lhs_sum, double rhs_sq, double p) {
  if (lhs_sum == 0.0) return 0.0;
  return std::pow(lhs_sum, 1.0 / p) / std::sqrt(rhs_sq);
}
}  // namespace

std::vector<double> DecouplingProblem::ratios(std::span<const cplx> coeffs) const {
  if (coeffs.size() != partition_.size()) throw PreconditionViolated("one coefficient per cell required");
  const std::vector<double> lhs = lhs_sums(coeffs);
  std::vector<double> out(ps_.size());
  for (std::size_t q = 0; q < ps_.size(); ++q) {
    const double p = ps_[q];
    double rhs = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      rhs += std::norm(coeffs[i]) * std::pow(cell_sums_[i][q], 2.0 / p);
    out[q] = ratio_of(lhs[q], rhs, p);
  }
  return out;
}

std::vector<double> DecouplingProblem::ratios_grouped(std::span<const cplx> coeffs,
                                                      std::span<const std::size_t> bounds) const {
  if (coeffs.size() != partition_.size()) throw PreconditionViolated("one coefficient per cell required");
  if (bounds.size() < 2 || bounds.front() != 0 || bounds.back() != partition_.size())
    throw PreconditionViolated("group bounds must run from 0 to the cell count");
  const std::vector<double> lhs = lhs_sums(coeffs);
  std::vector<double> rhs(ps_.size(), 0.0);
  for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
    if (bounds[g + 1] <= bounds[g]) throw PreconditionViolated("group bounds must increase");
    std::vector<double> s;
    if (bounds[g + 1] - bounds[g] == 1) {
      const std::size_t i = bounds[g];
      s = cell_sums_[i];
      for (std::size_t q = 0; q < ps_.size(); ++q) s[q] *= std::pow(std::abs(coeffs[i]), ps_[q]);
    } else {
      s = group_sums(coeffs, bounds[g], bounds[g + 1]);
    }
    for (std::size_t q = 0; q < ps_.size(); ++q) rhs[q] += std::pow(s[q], 2.0 / ps_[q]);
  }
  std::vector<double> out(ps_.size());
  for (std::size_t q = 0; q < ps_.size(); ++q) out[q] = ratio_of(lhs[q], rhs[q], ps_[q]);
  return out;
}

DecouplingProblem make_problem(const PolyPhase& phase, const Partition& partition, double delta,
                               std::vector<double> ps, const TrialSpec& trial, int threads) {
  trial.validate();
  LatticePlan plan = natural_lattice(phase, partition, delta, trial.nodes_per_cell, trial.box_x, trial.box_y);
  return DecouplingProblem(phase, partition, delta, std::move(ps), std::move(plan), threads);
}

DecouplingProblem restrict_cells(const DecouplingProblem& prob, std::size_t first, std::size_t last) {
  const Partition& P = prob.partition();
  if (!(first < last && last <= P.size())) throw PreconditionViolated("bad cell range");
  std::vector<double> cuts(P.cuts.begin() + static_cast<std::ptrdiff_t>(first),
                           P.cuts.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  Partition sub(Interval(cuts.front(), cuts.back()), cuts, P.scale_r);
  const LatticePlan& plan = prob.plan();
  std::vector<double> s, w;
  std::vector<std::int64_t> bin;
  for (std::size_t k = 0; k < plan.s.size(); ++k) {
    if (plan.cell[k] < first || plan.cell[k] >= last) continue;
    s.push_back(plan.s[k]);
    bin.push_back(plan.bin[k]);
    w.push_back(plan.weight[k]);
  }
  LatticePlan rp = custom_lattice(prob.phase(), sub, plan.spec, std::move(s), std::move(bin), std::move(w),
                                  plan.x_periodic);
  rp.period_nodes = plan.period_nodes;
  return DecouplingProblem(prob.phase(), std::move(sub), prob.delta(), prob.ps(), std::move(rp));
}

DecouplingProblem rescaled_problem(const DecouplingProblem& prob) {
  const Partition& P = prob.partition();
  const double alpha = P.base.lo;
  const double ell = P.base.length();
  const LatticePlan& plan = prob.plan();
  const double shift = alpha * plan.spec.dx * static_cast<double>(plan.spec.nx);
  const double ishift = std::nearbyint(shift);
  if (std::fabs(shift - ishift) > 1e-9 * std::max(1.0, shift))
    throw PreconditionViolated("rescaling needs alpha on the frequency lattice");
  kernels::LatticeSpec spec = plan.spec;
  spec.dx *= ell;
  spec.dy *= ell;
  spec.x0 *= ell;
  spec.y0 *= ell;
  std::vector<double> cuts;
  for (double c : P.cuts) cuts.push_back((c - alpha) / ell);
  cuts.front() = 0.0;
  cuts.back() = 1.0;
  Partition unit(Interval(0.0, 1.0), cuts, P.scale_r / ell);
  std::vector<double> s, w;
  std::vector<std::int64_t> bin;
  for (std::size_t k = 0; k < plan.s.size(); ++k) {
    s.push_back((plan.s[k] - alpha) / ell);
    bin.push_back(plan.bin[k] - static_cast<std::int64_t>(ishift));
    w.push_back(plan.weight[k] / ell);
  }
  const PolyPhase psi = rescale_to_unit(prob.phase(), from_double(alpha), from_double(P.base.hi));
  LatticePlan rp = custom_lattice(psi, unit, spec, std::move(s), std::move(bin), std::move(w), plan.x_periodic);
  return DecouplingProblem(psi, std::move(unit), prob.delta() / ell, prob.ps(), std::move(rp));
}

DecouplingProblem sheared_problem(const DecouplingProblem& prob, const AffineNormalization& norm) {
  if (!(norm.lambda > 0.0)) throw PreconditionViolated("shear needs lambda > 0");
  const LatticePlan& plan = prob.plan();
  kernels::LatticeSpec spec = plan.spec;
  spec.dy /= norm.lambda;
  spec.y0 /= norm.lambda;
  for (double v : {norm.shear_c * spec.dy / spec.dx, norm.shear_c * spec.y0 / spec.dx}) {
    if (std::fabs(v - std::nearbyint(v)) > 1e-9 * std::max(1.0, std::fabs(v)))
      throw IncompatibleShear("c y' / dx is not an integer on the sheared lattice");
  }
  if (norm.shear_c != 0.0 && !plan.x_periodic) throw IncompatibleShear("shear needs an x-periodic lattice");
  const PolyPhase psi =
      prob.phase().scaled(from_double(norm.lambda)).plus_linear(from_double(norm.shear_c), from_double(norm.shift_d));
  LatticePlan sp = custom_lattice(psi, prob.partition(), spec, plan.s, plan.bin, plan.weight, plan.x_periodic);
  sp.period_nodes = plan.period_nodes;
  return DecouplingProblem(psi, prob.partition(), prob.delta() * norm.lambda, prob.ps(), std::move(sp));
}

std::vector<DecouplingReport> decoupling_ratios(const PolyPhase& phase, const Partition& partition,
                                                std::span<const double> ps, double delta,
                                                const TrialSpec& trial, std::size_t trials,
                                                std::uint64_t seed, const DecouplingOptions& opts) {
  trial.validate();
  partition.validate();
  for (double p : ps)
    if (!(p >= 2.0 && p <= 6.0)) throw PreconditionViolated("p must lie in [2, 6]");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionViolated("delta must lie in (0, 1]");
  if (opts.check_sub_admissible && !is_sub_admissible(phase, partition, delta, opts.mode))
    throw PreconditionViolated("partition is not sub-admissible at delta");

  const std::vector<double> pv(ps.begin(), ps.end());
  const DecouplingProblem prob = make_problem(phase, partition, delta, pv, trial, opts.threads);
  std::optional<DecouplingProblem> wide;
  if (opts.periodization_check)
    wide.emplace(phase, partition, delta, pv, extend_y(prob.plan(), 2), opts.threads);

  std::vector<DecouplingReport> out(pv.size());
  for (std::size_t q = 0; q < pv.size(); ++q) {
    DecouplingReport& r = out[q];
    r.phase_id = opts.phase_id.empty() ? phase.to_string() : opts.phase_id;
    r.partition_id = opts.partition_id;
    r.p = pv[q];
    r.delta = delta;
    r.trials = trials;
    r.model = trial.model;
    r.seed = seed;
    r.cells = partition.size();
    r.underresolved_cells = prob.plan().underresolved_cells;
    r.sub_admissible_checked = opts.check_sub_admissible;
    r.lattice = prob.plan().spec;
  }
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    const std::vector<cplx> c = draw_coefficients(trial.model, partition.size(), rng);
    const std::vector<double> rat = prob.ratios(c);
    for (std::size_t q = 0; q < pv.size(); ++q) out[q].ratios.push_back(rat[q]);
    if (wide) {
      const std::vector<double> rat2 = wide->ratios(c);
      for (std::size_t q = 0; q < pv.size(); ++q) out[q].ratios_2x.push_back(rat2[q]);
    }
  }
  auto summarize = [](const std::vector<double>& v, double& mx, double& mean) {
    mx = 0.0;
    double sum = 0.0;
    for (double x : v) {
      mx = std::max(mx, x);
      sum += x;
    }
    mean = v.empty() ? 0.0 : sum / static_cast<double>(v.size());
    mx = std::max(mx, mean);  // guards the last-ulp case of equal ratios
  };
  for (auto& r : out) {
    summarize(r.ratios, r.max_ratio, r.mean_ratio);
    if (!r.ratios_2x.empty()) summarize(r.ratios_2x, r.max_ratio_2x, r.mean_ratio_2x);
  }
  return out;
}

DecouplingReport decoupling_ratio(const PolyPhase& phase, const Partition& partition, double p,
                                  double delta, const TrialSpec& trial, std::size_t trials,
                                  std::uint64_t seed, const DecouplingOptions& opts) {
  const double ps[] = {p};
  return decoupling_ratios(phase, partition, ps, delta, trial, trials, seed, opts).front();
}

Partition too_fine_partition(const Partition& P) {
  P.validate();
  std::vector<double> cuts{P.cuts.front()};
  for (std::size_t i = 0; i < P.size(); ++i) {
    cuts.push_back(P.cell(i).midpoint());
    cuts.push_back(P.cuts[i + 1]);
  }
  return Partition(P.base, std::move(cuts), P.scale_r);
}

BadSetSplit split_by_badset(const Partition& P, const BadSet& B) {
  BadSetSplit out;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Interval I = P.cell(i);
    double overlap = 0.0;
    for (const auto& c : B.components) overlap += std::max(0.0, std::min(c.hi, I.hi) - std::max(c.lo, I.lo));
    const double len = I.length();
    if (overlap >= len * (1.0 - 1e-12)) out.inside.push_back(i);
    else if (overlap <= len * 1e-12) out.outside.push_back(i);
    else out.straddle.push_back(i);
  }
  if (out.inside.size() + out.outside.size() + out.straddle.size() != P.size())
    throw InvariantBreach("bad-set split lost cells");
  if (out.straddle.size() > 2 * B.components.size())
    throw InvariantBreach("more than two straddling cells per bad-set component");
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionViolated("slope fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace polydec
