#include "polydec/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "polydec/errors.hpp"
#include "polydec/io/schema.hpp"

namespace polydec {

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return format_double(v.get<double>());
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
}

void emit(const std::vector<CommandResult>& results, const std::string& dir, bool table_only, std::ostream& out) {
  if (dir.empty()) {
    for (const auto& r : results) out << (table_only && !r.table.empty() ? r.table : dump_json(r.report));
    return;
  }
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  for (const auto& r : results) {
    write_file(d / (r.name + ".json"), dump_json(r.report));
    if (!r.csv.empty()) write_file(d / (r.name + ".csv"), r.csv);
    if (!r.svg.empty()) write_file(d / (r.name + ".svg"), r.svg);
    if (!r.table.empty()) write_file(d / (r.name + ".txt"), r.table);
    out << r.summary << (r.summary.empty() || r.summary.back() == '\n' ? "" : "\n");
    out << "  -> " << (d / (r.name + ".json")).string() << "\n";
  }
}

}  // namespace

int exit_code_of(const std::exception& e) {
  if (dynamic_cast<const SchemaViolation*>(&e) || dynamic_cast<const ParseError*>(&e)) return kExitSchema;
  if (dynamic_cast<const BudgetExceeded*>(&e) || dynamic_cast<const QuadratureBudgetExceeded*>(&e))
    return kExitBudget;
  if (dynamic_cast<const InvariantBreach*>(&e)) return kExitInvariant;
  return kExitError;
}

std::string write_repro_bundle(const std::vector<std::string>& args, const std::string& dir,
                               const std::string& what, const Json& config) {
  const std::filesystem::path d = dir.empty() ? std::filesystem::path(".") : std::filesystem::path(dir);
  try {
    std::filesystem::create_directories(d);
    Json j{{"args", args}, {"error", what}, {"config", config}, {"kind", "repro-bundle"}};
    write_file(d / "repro-bundle.json", dump_json(j));
    return (d / "repro-bundle.json").string();
  } catch (const std::exception&) {
    return {};
  }
}

ExperimentConfig config_from_json(const Json& j) {
  validate_json(j, "config");
  ExperimentConfig c;
  c.subcommands = j.at("subcommands").get<std::vector<std::string>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("phase")) c.phase = j["phase"].get<std::string>();
  if (j.contains("deltas")) {
    c.deltas.clear();
    for (const auto& v : j["deltas"]) c.deltas.push_back(scalar_text(v));
  }
  if (j.contains("ps")) c.ps = j["ps"].get<std::vector<double>>();
  if (j.contains("base")) {
    const Interval b = interval_from_json(j["base"]);
    c.base_lo = b.lo;
    c.base_hi = b.hi;
  }
  if (j.contains("partition")) {
    const auto& p = j["partition"];
    c.partition_mode = p.value("mode", c.partition_mode);
    c.predicate = p.value("predicate", c.predicate);
    c.partition_file = p.value("file", c.partition_file);
  }
  if (j.contains("trial")) {
    const auto& t = j["trial"];
    c.model = t.value("model", c.model);
    c.nodes_per_cell = t.value("nodes_per_cell", c.nodes_per_cell);
    c.box_x = t.value("box_x", c.box_x);
    c.box_y = t.value("box_y", c.box_y);
    c.trials = t.value("trials", c.trials);
    c.periodization_check = t.value("periodization_check", c.periodization_check);
    c.bypass_sub_admissible = t.value("bypass_sub_admissible", c.bypass_sub_admissible);
  }
  if (j.contains("badset")) {
    const auto& b = j["badset"];
    const Interval J = interval_from_json(b["J"]);
    c.J_lo = J.lo;
    c.J_hi = J.hi;
    c.sigma = b["sigma"].get<double>();
    c.d = b["d"].get<int>();
    c.C_d = b.value("C_d", c.C_d);
  }
  if (j.contains("bootstrap")) {
    const auto& b = j["bootstrap"];
    if (b.contains("K")) c.K = scalar_text(b["K"]);
    if (b.contains("eps")) c.eps = scalar_text(b["eps"]);
    if (b.contains("C")) c.C = scalar_text(b["C"]);
  }
  if (j.contains("appendix")) {
    const auto& a = j["appendix"];
    c.appendix_d = a.value("d", c.appendix_d);
    c.appendix_C = a.value("C", c.appendix_C);
    c.appendix_grid = a.value("grid", c.appendix_grid);
  }
  c.threads = j.value("threads", 0);
  c.svg = j.value("svg", false);
  for (const auto& d : c.deltas) {
    Rational q;
    try {
      q = parse_rational(d);
    } catch (const ParseError&) {
      throw SchemaViolation("delta is not a number: " + d);
    }
    if (!(q > 0 && q <= 1)) throw SchemaViolation("delta must lie in (0, 1]: " + d);
  }
  return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::string config_path;
  bool table_only = false;
  Json config_json = nullptr;

  CLI::App app{"polydec: partitions, bad sets, caps and decoupling experiments for polynomial phases"};
  app.require_subcommand(1, 1);

  auto add_phase = [&](CLI::App* s) { s->add_option("--phase", cfg.phase, "polynomial phase, e.g. s^3 - 1/2*s^2"); };
  auto add_deltas = [&](CLI::App* s) {
    s->add_option("--delta", cfg.deltas, "scale(s); rationals or decimals, comma separated")->delimiter(',');
  };
  auto add_partition = [&](CLI::App* s) {
    s->add_option("--mode", cfg.predicate, "property-P predicate")->check(CLI::IsMember({"exact", "taylor"}));
    s->add_option("--partition", cfg.partition_mode, "partition source")
        ->check(CLI::IsMember({"greedy", "canonical", "file"}));
    s->add_option("--partition-file", cfg.partition_file, "partition JSON (base, cuts) for --partition file");
    s->add_option("--base", [&](const std::vector<std::string>& v) {
        if (v.size() != 2) return false;
        cfg.base_lo = std::stod(v[0]);
        cfg.base_hi = std::stod(v[1]);
        return true;
      }, "base interval lo,hi")->expected(2)->delimiter(',');
  };
  auto add_out = [&](CLI::App* s) {
    s->add_option("--out", cfg.output_dir, "output directory (default: JSON on stdout)");
  };

  CLI::App* part = app.add_subcommand("partition", "greedy/canonical admissible partition");
  add_phase(part), add_deltas(part), add_partition(part), add_out(part);

  CLI::App* bad = app.add_subcommand("badset", "bad set B(phi, J) and its D_d bounds");
  add_phase(bad), add_out(bad);
  bad->add_option("--J", [&](const std::vector<std::string>& v) {
      if (v.size() != 2) return false;
      cfg.J_lo = std::stod(v[0]);
      cfg.J_hi = std::stod(v[1]);
      return true;
    }, "interval lo,hi")->expected(2)->delimiter(',');
  bad->add_option("--sigma", cfg.sigma, "sigma");
  bad->add_option("--d", cfg.d, "class degree d");
  bad->add_option("--Cd", cfg.C_d, "constant C_d (default: analytic value)");

  CLI::App* nb = app.add_subcommand("neighborhood", "cap parallelograms and truncation overlaps");
  add_phase(nb), add_deltas(nb), add_partition(nb), add_out(nb);

  CLI::App* est = app.add_subcommand("estimate", "empirical decoupling ratios");
  add_phase(est), add_deltas(est), add_partition(est), add_out(est);
  est->add_option("--p", cfg.ps, "exponent(s) in [2, 6]")->delimiter(',');
  est->add_option("--trials", cfg.trials, "trials per (delta, p)");
  est->add_option("--seed", cfg.seed, "master seed");
  est->add_option("--model", cfg.model, "coefficient model")
      ->check(CLI::IsMember({"unimodular", "gaussian", "ones"}));
  est->add_option("--nodes-per-cell", cfg.nodes_per_cell, "minimum lattice nodes per cell (>= 4)");
  est->add_option("--box-x", cfg.box_x, "x box multiplier");
  est->add_option("--box-y", cfg.box_y, "y box multiplier");
  est->add_option("--threads", cfg.threads, "OpenMP threads (0: runtime default)");
  est->add_flag("--periodization-check", cfg.periodization_check, "also measure on the 2x y-box");
  est->add_flag("--bypass-sub-admissible", cfg.bypass_sub_admissible, "skip the sub-admissibility gate");
  est->add_flag("--svg", cfg.svg, "write a log-log SVG next to the CSV (needs --out)");

  CLI::App* boot = app.add_subcommand("bootstrap", "induction-on-scales traces");
  add_deltas(boot), add_out(boot);
  boot->add_option("--K", cfg.K, "recursion constant K > 1");
  boot->add_option("--eps", cfg.eps, "epsilon (rational)");
  boot->add_option("--C", cfg.C, "constant C_{eps,M}");
  boot->add_flag("--table", table_only, "print the human-readable table instead of JSON");

  CLI::App* app_chk = app.add_subcommand("appendix-check", "dyadic-block Minkowski containment and overlaps");
  add_deltas(app_chk), add_out(app_chk);
  app_chk->add_option("--d", cfg.appendix_d, "monomial degree");
  app_chk->add_option("--C", cfg.appendix_C, "containment constant (default d 2^d)");
  app_chk->add_option("--grid", cfg.appendix_grid, "grid points per axis");

  CLI::App* run = app.add_subcommand("run", "run the subcommands of an experiment config");
  run->add_option("--config", config_path, "experiment config JSON")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitSchema;
  }

  try {
    std::vector<CommandResult> results;
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw SchemaViolation("cannot read config " + config_path);
      try {
        config_json = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw SchemaViolation(std::string("config does not parse: ") + e.what());
      }
      cfg = config_from_json(config_json);
      for (const auto& name : cfg.subcommands) {
        auto r = run_subcommand(name, cfg);
        for (auto& x : r) results.push_back(std::move(x));
      }
    } else {
      const std::string name = app.get_subcommands().front()->get_name();
      if (name == "appendix-check" && app_chk->count("--delta") == 0) cfg.deltas = {"1/64", "1/256", "1/1024"};
      if (name == "bootstrap" && boot->count("--delta") == 0) cfg.deltas = {"1/65536"};
      results = run_subcommand(name, cfg);
    }
    emit(results, cfg.output_dir, table_only, out);
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = exit_code_of(e);
    const char* label = code == kExitSchema ? "schema violation" : code == kExitBudget ? "budget exceeded"
                        : code == kExitInvariant ? "invariant breach" : "error";
    err << label << ": " << e.what() << "\n";
    if (code == kExitInvariant) {
      const std::string path = write_repro_bundle(args, cfg.output_dir, e.what(), config_json);
      err << (path.empty() ? std::string("could not write repro bundle") : "repro bundle written to " + path) << "\n";
    }
    return code;
  }
}

}  // namespace polydec
