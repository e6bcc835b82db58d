#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydec/grid_field.hpp"
#include "polydec/partition.hpp"
#include "polydec/phase_analysis.hpp"
#include "polydec/rng.hpp"

namespace polydec {

enum class CoeffModel { unimodular, gaussian, ones };

std::string to_string(CoeffModel m);
CoeffModel parse_coeff_model(std::string_view s);

struct TrialSpec {
  CoeffModel model = CoeffModel::unimodular;
  std::size_t nodes_per_cell = 8;
  double box_x = 1.0;
  double box_y = 1.0;

  void validate() const;
};

/// unimodular: e(u), u uniform; gaussian: (N + iN) / sqrt 2; ones: 1.
std::vector<cplx> draw_coefficients(CoeffModel model, std::size_t n, Rng& rng);

/// Lattice decoupling problem for fixed (phase, partition, plan, p list).
/// f_I = c_I F_I where F_I is the cell field with unit coefficient, so the
/// per-cell sums are computed once and each trial needs one full-lattice pass.
class DecouplingProblem {
 public:
  DecouplingProblem(PolyPhase phase, Partition partition, double delta, std::vector<double> ps,
                    LatticePlan plan, int threads = 0);

  const PolyPhase& phase() const noexcept { return phase_; }
  const Partition& partition() const noexcept { return partition_; }
  double delta() const noexcept { return delta_; }
  const std::vector<double>& ps() const noexcept { return ps_; }
  const LatticePlan& plan() const noexcept { return plan_; }
  /// sum over the lattice of |F_I|^p, indexed [cell][p].
  const std::vector<std::vector<double>>& cell_sums() const noexcept { return cell_sums_; }

  /// sum |f|^p per p.
  std::vector<double> lhs_sums(std::span<const cplx> coeffs) const;
  /// ||f||_p / (sum_I ||f_I||_p^2)^{1/2} per p.
  std::vector<double> ratios(std::span<const cplx> coeffs) const;
  /// Same with the right side taken over groups of consecutive cells
  /// [bounds[g], bounds[g + 1]).
  std::vector<double> ratios_grouped(std::span<const cplx> coeffs,
                                     std::span<const std::size_t> bounds) const;

 private:
  std::vector<double> group_sums(std::span<const cplx> coeffs, std::size_t lo, std::size_t hi) const;

  PolyPhase phase_;
  Partition partition_;
  double delta_;
  std::vector<double> ps_;
  LatticePlan plan_;
  int threads_;
  std::vector<std::vector<double>> cell_sums_;
};

/// Natural-lattice problem.
DecouplingProblem make_problem(const PolyPhase& phase, const Partition& partition, double delta,
                               std::vector<double> ps, const TrialSpec& trial, int threads = 0);

/// Cells [first, last) only, same lattice and nodes.
DecouplingProblem restrict_cells(const DecouplingProblem& prob, std::size_t first, std::size_t last);

/// Problem for psi = rescale_to_unit(phase, alpha, beta) over J = [alpha, beta]
/// = the base of prob, at scale delta / (beta - alpha): nodes (s - alpha) / l,
/// bins shifted by alpha Lx, steps multiplied by l. Requires alpha Lx integral.
DecouplingProblem rescaled_problem(const DecouplingProblem& prob);

/// Problem for lambda phi + c s + d at scale delta / lambda on the lattice
/// y' = y / lambda. Throws IncompatibleShear unless c dy' / dx and c y0' / dx
/// are integers.
DecouplingProblem sheared_problem(const DecouplingProblem& prob, const AffineNormalization& norm);

struct DecouplingOptions {
  bool check_sub_admissible = true;  // false only for negative controls
  PMode mode = PMode::exact;
  bool periodization_check = false;  // also measure on the 2x y-box
  int threads = 0;
  std::string phase_id;
  std::string partition_id;
};

struct DecouplingReport {
  std::string phase_id;
  std::string partition_id;
  double p = 2.0;
  double delta = 0.0;
  std::size_t trials = 0;
  CoeffModel model = CoeffModel::unimodular;
  std::uint64_t seed = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::vector<double> ratios_2x;  // empty unless periodization_check
  double max_ratio_2x = 0.0;
  double mean_ratio_2x = 0.0;
  std::size_t cells = 0;
  std::size_t underresolved_cells = 0;
  bool sub_admissible_checked = false;
  kernels::LatticeSpec lattice;
};

/// One report per p; trial i uses coefficients from derive_seed(seed, i).
/// Throws PreconditionViolated when the sub-admissibility check is on and fails.
std::vector<DecouplingReport> decoupling_ratios(const PolyPhase& phase, const Partition& partition,
                                                std::span<const double> ps, double delta,
                                                const TrialSpec& trial, std::size_t trials,
                                                std::uint64_t seed, const DecouplingOptions& opts = {});

DecouplingReport decoupling_ratio(const PolyPhase& phase, const Partition& partition, double p,
                                  double delta, const TrialSpec& trial, std::size_t trials,
                                  std::uint64_t seed, const DecouplingOptions& opts = {});

/// Halves every cell: a partition finer than sub-admissible.
Partition too_fine_partition(const Partition& P);

struct BadSetSplit {
  std::vector<std::size_t> inside;    // cells contained in B
  std::vector<std::size_t> outside;   // cells disjoint from B (up to measure zero)
  std::vector<std::size_t> straddle;  // the rest
};

/// Classifies cells by overlap measure; throws InvariantBreach when more than
/// two cells per component of B straddle.
BadSetSplit split_by_badset(const Partition& P, const BadSet& B);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace polydec
