#include <cmath>
#include <fstream>
#include <sstream>

#include "polydec/cli.hpp"
#include "polydec/errors.hpp"
#include "polydec/io/schema.hpp"
#include "polydec/io/svg.hpp"

namespace polydec {

namespace {

struct Scale {
  Rational exact;
  double value;
};

Scale parse_delta(const std::string& text) {
  Rational q;
  try {
    q = parse_rational(text);
  } catch (const ParseError&) {
    throw SchemaViolation("delta is not a number: " + text);
  }
  if (!(q > 0 && q <= 1)) throw SchemaViolation("delta must lie in (0, 1]: " + text);
  return {q, to_double(q)};
}

PMode parse_mode(const std::string& m) {
  if (m == "exact") return PMode::exact;
  if (m == "taylor") return PMode::taylor;
  throw SchemaViolation("mode must be exact or taylor: " + m);
}

std::string ordinal_stem(const std::string& base, std::size_t i, std::size_t n) {
  return n == 1 ? base : base + "-" + std::to_string(i);
}

struct BuiltPartition {
  Partition P;
  std::string id;
  double step_lower_bound = 0.0;
};

BuiltPartition build_partition(const ExperimentConfig& cfg, const PolyPhase& phi, const Scale& delta) {
  const PMode mode = parse_mode(cfg.predicate);
  const Interval base(cfg.base_lo, cfg.base_hi);
  BuiltPartition out;
  if (cfg.partition_mode == "greedy") {
    GreedyResult g = greedy_admissible_traced(phi, base, delta.value, mode);
    out.P = std::move(g.partition);
    out.step_lower_bound = std::isfinite(g.step_lower_bound) ? g.step_lower_bound : 0.0;
    out.id = "greedy-" + cfg.predicate;
    return out;
  }
  if (cfg.partition_mode == "canonical") {
    if (base.lo != 0.0 || base.hi != 1.0) throw PreconditionViolated("canonical partition lives on [0, 1]");
    out.P = canonical_partition(delta.exact);
    out.id = "canonical";
  } else if (cfg.partition_mode == "file") {
    std::ifstream in(cfg.partition_file);
    if (!in) throw SchemaViolation("cannot read partition file " + cfg.partition_file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw SchemaViolation(std::string("partition file: ") + e.what());
    }
    out.P = partition_from_json(j);
    out.P.scale_r = delta.value;
    out.id = "file";
  } else {
    throw SchemaViolation("partition mode must be greedy, canonical or file");
  }
  const double M = phi.is_linear() ? 0.0 : sup_abs_deriv(phi, out.P.base, 2).value;
  out.step_lower_bound = M > 0.0 ? 2.0 * std::sqrt(delta.value / M) : 0.0;
  return out;
}

CommandResult finish(std::string name, std::string schema, Json report, std::string summary) {
  validate_json(report, schema);
  CommandResult r;
  r.name = std::move(name);
  r.schema = std::move(schema);
  r.report = std::move(report);
  r.summary = std::move(summary);
  return r;
}

std::vector<CommandResult> cmd_partition(const ExperimentConfig& cfg) {
  const PolyPhase phi = parse_phase(cfg.phase);
  const PMode mode = parse_mode(cfg.predicate);
  std::vector<CommandResult> out;
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
    const Scale delta = parse_delta(cfg.deltas[i]);
    const BuiltPartition bp = build_partition(cfg, phi, delta);
    const bool sup_ok = is_super_admissible(phi, bp.P, delta.value, mode);
    const bool sub_ok = is_sub_admissible(phi, bp.P, delta.value, mode);
    Json j{{"kind", "partition"},
           {"version", 1},
           {"phase", phi.to_string()},
           {"delta", delta.value},
           {"delta_exact", to_string(delta.exact)},
           {"mode", cfg.predicate},
           {"method", cfg.partition_mode},
           {"base", to_json(bp.P.base)},
           {"cuts", cuts_json(bp.P)},
           {"cells", bp.P.size()},
           {"super_admissible", sup_ok},
           {"sub_admissible", sub_ok},
           {"count_bound_ok", count_bound(bp.P, phi, delta.value)},
           {"step_lower_bound", bp.step_lower_bound}};
    std::ostringstream s;
    s << "partition delta=" << to_string(delta.exact) << ": " << bp.P.size() << " cells, super-admissible "
      << (sup_ok ? "yes" : "no") << ", sub-admissible " << (sub_ok ? "yes" : "no");
    out.push_back(finish(ordinal_stem("partition", i, cfg.deltas.size()), "partition", std::move(j), s.str()));
  }
  return out;
}

std::vector<CommandResult> cmd_badset(const ExperimentConfig& cfg) {
  const PolyPhase phi = parse_phase(cfg.phase);
  DdParams params{cfg.d, cfg.C_d > 0.0 ? cfg.C_d : analytic_Cd(cfg.d), cfg.sigma};
  params.validate();
  const Interval J(cfg.J_lo, cfg.J_hi);
  const BadSet B = bad_set(phi, J, params);
  Json comps = Json::array();
  for (const auto& c : B.components) comps.push_back(to_json(c));
  const double bound = params.C_d * std::pow(params.sigma, 1.0 / params.d) * J.length();
  const bool count_ok = static_cast<double>(B.components.size()) <= params.C_d;
  const bool meas_ok = B.measure() <= bound;
  Json j{{"kind", "badset"},         {"version", 1},
         {"phase", phi.to_string()}, {"J", to_json(J)},
         {"sigma", params.sigma},    {"d", params.d},
         {"C_d", params.C_d},        {"threshold", B.threshold},
         {"components", comps},      {"measure", B.measure()},
         {"measure_bound", bound},   {"component_bound_ok", count_ok},
         {"measure_bound_ok", meas_ok}};
  std::ostringstream s;
  s << "badset: " << B.components.size() << " components, measure " << format_double(B.measure()) << " (bound "
    << format_double(bound) << ")";
  return {finish("badset", "badset", std::move(j), s.str())};
}

std::vector<CommandResult> cmd_neighborhood(const ExperimentConfig& cfg) {
  const PolyPhase phi = parse_phase(cfg.phase);
  std::vector<CommandResult> out;
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
    const Scale delta = parse_delta(cfg.deltas[i]);
    const BuiltPartition bp = build_partition(cfg, phi, delta);
    Json caps = Json::array();
    bool all = true;
    double min_len = bp.P.cell(0).length();
    for (std::size_t k = 0; k < bp.P.size(); ++k) {
      const Parallelogram p = cap_parallelogram(phi, bp.P.cell(k), delta.value);
      all = all && p.required_half_height <= p.half_height;
      caps.push_back(to_json(p));
      min_len = std::min(min_len, bp.P.cell(k).length());
    }
    Json overlap = nullptr;
    if (delta.value <= min_len) {
      const OverlapReport rep = neighbor_truncation_overlap(bp.P, DualRect(delta.value, delta.value));
      overlap = to_json(rep, delta.value);
    }
    Json j{{"kind", "neighborhood"}, {"version", 1},          {"phase", phi.to_string()},
           {"delta", delta.value},   {"mode", cfg.predicate}, {"caps", caps},
           {"all_contained", all},   {"overlap", overlap}};
    std::ostringstream s;
    s << "neighborhood delta=" << to_string(delta.exact) << ": " << bp.P.size() << " caps, all contained "
      << (all ? "yes" : "no");
    out.push_back(finish(ordinal_stem("neighborhood", i, cfg.deltas.size()), "neighborhood", std::move(j), s.str()));
  }
  return out;
}

std::vector<CommandResult> cmd_estimate(const ExperimentConfig& cfg) {
  const PolyPhase phi = parse_phase(cfg.phase);
  for (double p : cfg.ps)
    if (!(p >= 2.0 && p <= 6.0)) throw SchemaViolation("p must lie in [2, 6]");
  if (cfg.ps.empty()) throw SchemaViolation("estimate needs at least one p");
  TrialSpec ts;
  ts.model = parse_coeff_model(cfg.model);
  ts.nodes_per_cell = cfg.nodes_per_cell;
  ts.box_x = cfg.box_x;
  ts.box_y = cfg.box_y;
  DecouplingOptions opts;
  opts.check_sub_admissible = !cfg.bypass_sub_admissible;
  opts.mode = parse_mode(cfg.predicate);
  opts.periodization_check = cfg.periodization_check;
  opts.threads = cfg.threads;
  opts.phase_id = phi.to_string();

  std::vector<DecouplingReport> reports;
  std::vector<double> inv;
  for (const auto& ds : cfg.deltas) {
    const Scale delta = parse_delta(ds);
    const BuiltPartition bp = build_partition(cfg, phi, delta);
    opts.partition_id = bp.id;
    auto reps = decoupling_ratios(phi, bp.P, cfg.ps, delta.value, ts, cfg.trials, cfg.seed, opts);
    for (auto& r : reps) reports.push_back(std::move(r));
    inv.push_back(1.0 / delta.value);
  }
  Json slopes = Json::array();
  if (cfg.deltas.size() >= 2) {
    for (std::size_t q = 0; q < cfg.ps.size(); ++q) {
      std::vector<double> y;
      for (std::size_t i = 0; i < cfg.deltas.size(); ++i) y.push_back(reports[i * cfg.ps.size() + q].max_ratio);
      slopes.push_back(Json{{"phase", phi.to_string()},
                            {"p", cfg.ps[q]},
                            {"slope", loglog_slope(inv, y)},
                            {"points", cfg.deltas.size()}});
    }
  }
  Json rj = Json::array();
  for (const auto& r : reports) rj.push_back(to_json(r));
  Json j{{"kind", "estimate"}, {"version", 1}, {"reports", rj}, {"slopes", slopes}};
  std::ostringstream s;
  s << "estimate: " << reports.size() << " (delta, p) points";
  for (const auto& r : reports)
    s << "\n  delta=" << format_double(r.delta) << " p=" << format_double(r.p)
      << " max_ratio=" << format_double(r.max_ratio) << " mean_ratio=" << format_double(r.mean_ratio);
  for (const auto& sl : slopes)
    s << "\n  slope p=" << format_double(sl["p"].get<double>()) << ": " << format_double(sl["slope"].get<double>());
  CommandResult res = finish("estimate", "estimate", std::move(j), s.str());
  res.csv = estimate_csv(reports);
  if (cfg.svg) res.svg = svg_from_estimate_csv(res.csv);
  return {std::move(res)};
}

std::string trace_table(const RecursionTrace& t) {
  std::ostringstream s;
  if (t.kind == "main") {
    s << "main recursion: K=" << to_string(t.K) << " eps=" << to_string(t.eps) << " C=" << to_string(t.C)
      << " M=" << to_string(t.M) << " delta=" << to_string(t.delta) << " n=" << t.n << "\n";
    s << "  j  scale  bound = a + b * C delta^-eps\n";
    for (std::size_t j = 0; j < t.steps.size(); ++j)
      s << "  " << j << "  " << to_string(t.steps[j].scale) << "  " << to_string(t.steps[j].a) << " + "
        << to_string(t.steps[j].b) << " Y   [" << t.steps[j].rule << "]\n";
    s << "  K^n + n K^n Y = " << to_string(t.bound_a) << " + " << to_string(t.stepwise_b) << " Y <= "
      << to_string(t.power_coeff) << " Y <= " << to_string(t.closed_form_coeff)
      << " C delta^-2eps  (closed form carries 2 eps)\n";
  } else {
    s << "nonzero iteration: delta=" << to_string(t.delta) << " n=" << t.n << "\n  chain:";
    for (const auto& st : t.steps) s << " " << to_string(st.scale) << (st.clamped ? "*" : "");
    s << "\n";
  }
  return s.str();
}

std::vector<CommandResult> cmd_bootstrap(const ExperimentConfig& cfg) {
  if (cfg.deltas.empty()) throw SchemaViolation("bootstrap needs delta");
  const Scale delta = parse_delta(cfg.deltas.front());
  Rational K, eps, C;
  try {
    K = parse_rational(cfg.K);
    eps = parse_rational(cfg.eps);
    C = parse_rational(cfg.C);
  } catch (const ParseError& e) {
    throw SchemaViolation(std::string("bootstrap parameters: ") + e.what());
  }
  const RecursionTrace main = unroll_main(K, eps, C, delta.exact);
  std::string table = trace_table(main);
  Json nonzero = nullptr;
  Json geo = nullptr;
  if (delta.exact < Rational(1, 4)) {
    const RecursionTrace nz = iterate_nonzero(delta.exact);
    nonzero = to_json(nz);
    geo = to_string(geometric_exponent_sum(nz.n));
    table += trace_table(nz);
    table += "  geometric exponent sum (n=" + std::to_string(nz.n) + "): " + geo.get<std::string>() + "\n";
  }
  Json j{{"kind", "bootstrap"}, {"version", 1}, {"main", to_json(main)}, {"nonzero", nonzero}, {"geometric_sum", geo}};
  CommandResult r = finish("bootstrap", "bootstrap", std::move(j), table);
  r.table = table;
  return {std::move(r)};
}

std::vector<CommandResult> cmd_appendix(const ExperimentConfig& cfg) {
  const int d = cfg.appendix_d;
  const double C = cfg.appendix_C > 0.0 ? cfg.appendix_C : d * std::ldexp(1.0, d);
  Json results = Json::array();
  bool all = true, adjacent = true;
  std::ostringstream s;
  for (const auto& ds : cfg.deltas) {
    const Scale delta = parse_delta(ds);
    const DyadicDecomposition dec = dyadic_blocks(delta.exact, d);
    Json blocks = Json::array();
    for (const auto& b : dec.blocks) {
      const MinkowskiReport m = minkowski_contained(d, delta.exact, b.n, C, cfg.appendix_grid);
      Json bj = to_json(m);
      bj["block"] = to_json(b.block);
      bj["a_n"] = to_string(b.a_n);
      bj["sub_admissible"] = b.sub_admissible;
      bj["min_union_ratio"] = b.min_union_ratio;
      bj["cells"] = b.cells.size();
      all = all && m.contained;
      blocks.push_back(std::move(bj));
    }
    const Partition canon = canonical_partition(delta.exact);
    const OverlapReport ov = neighbor_truncation_overlap(canon, DualRect(delta.value, std::pow(delta.value, 0.5 * d)));
    adjacent = adjacent && ov.adjacent_only;
    results.push_back(Json{{"delta", to_string(delta.exact)},
                           {"blocks", blocks},
                           {"uncovered", dec.uncovered ? to_json(*dec.uncovered) : Json(nullptr)},
                           {"adjacent_only", ov.adjacent_only}});
    s << "appendix delta=" << to_string(delta.exact) << ": " << dec.blocks.size() << " blocks\n";
  }
  Json j{{"kind", "appendix-check"}, {"version", 1}, {"d", d}, {"C", C},
         {"results", results},       {"all_contained", all}, {"adjacent_only", adjacent},
         {"sub_admissibility_claim", "reported per block, not asserted"}};
  s << "  all contained " << (all ? "yes" : "no") << ", adjacency " << (adjacent ? "yes" : "no");
  return {finish("appendix", "appendix", std::move(j), s.str())};
}

}  // namespace

std::vector<CommandResult> run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "partition") return cmd_partition(cfg);
  if (name == "badset") return cmd_badset(cfg);
  if (name == "neighborhood") return cmd_neighborhood(cfg);
  if (name == "estimate") return cmd_estimate(cfg);
  if (name == "bootstrap") return cmd_bootstrap(cfg);
  if (name == "appendix-check") return cmd_appendix(cfg);
  throw SchemaViolation("unknown subcommand: " + name);
}

}  // namespace polydec
