#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polydec/io/json_io.hpp"

namespace polydec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInvariant = 4;

/// Flattened experiment parameters shared by every subcommand.
struct ExperimentConfig {
  std::vector<std::string> subcommands;
  std::string phase = "s^2";
  std::vector<std::string> deltas{"1/256"};
  std::vector<double> ps{4.0};
  double base_lo = 0.0, base_hi = 1.0;
  std::string partition_mode = "greedy";  // greedy | canonical | file
  std::string predicate = "exact";        // exact | taylor
  std::string partition_file;
  std::string model = "unimodular";
  std::size_t nodes_per_cell = 8;
  double box_x = 1.0, box_y = 1.0;
  std::size_t trials = 16;
  bool periodization_check = false;
  bool bypass_sub_admissible = false;
  // badset
  double J_lo = 0.0, J_hi = 1.0;
  double sigma = 1e-4;
  int d = 3;
  double C_d = 0.0;  // 0: analytic value for d
  // bootstrap
  std::string K = "2", eps = "1/2", C = "1";
  // appendix
  int appendix_d = 3;
  double appendix_C = 0.0;  // 0: d 2^d
  std::size_t appendix_grid = 512;
  std::uint64_t seed = 0;
  int threads = 0;
  bool svg = false;
  std::string output_dir;
};

/// Validates against the embedded config schema (SchemaViolation) and fills
/// an ExperimentConfig; delta values must lie in (0, 1].
ExperimentConfig config_from_json(const Json& j);

struct CommandResult {
  std::string name;    // file stem
  std::string schema;  // schema name the report re-validates against
  Json report;
  std::string csv;
  std::string svg;
  std::string table;
  std::string summary;
};

/// Runs one subcommand; the report is validated against its schema.
std::vector<CommandResult> run_subcommand(const std::string& name, const ExperimentConfig& cfg);

/// 2 schema/parse, 3 budget, 4 invariant breach, 1 anything else.
int exit_code_of(const std::exception& e);

/// Writes <dir or .>/repro-bundle.json with the arguments, error and config;
/// returns its path, or "" on failure.
std::string write_repro_bundle(const std::vector<std::string>& args, const std::string& dir,
                               const std::string& what, const Json& config);

/// Full command line front end; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polydec
