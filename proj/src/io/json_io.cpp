#include "polydec/io/json_io.hpp"

#include <charconv>
#include <sstream>

#include "polydec/errors.hpp"

namespace polydec {

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const Interval& I) { return Json::array({I.lo, I.hi}); }

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const kernels::LatticeSpec& s) {
  return Json{{"nx", s.nx}, {"ny", s.ny}, {"dx", s.dx}, {"dy", s.dy}, {"x0", s.x0}, {"y0", s.y0}};
}

Json to_json(const DecouplingReport& r) {
  Json j{{"phase", r.phase_id},
         {"partition", r.partition_id},
         {"p", r.p},
         {"delta", r.delta},
         {"trials", r.trials},
         {"model", to_string(r.model)},
         {"seed", r.seed},
         {"ratios", r.ratios},
         {"max_ratio", r.max_ratio},
         {"mean_ratio", r.mean_ratio},
         {"cells", r.cells},
         {"underresolved_cells", r.underresolved_cells},
         {"sub_admissible_checked", r.sub_admissible_checked},
         {"lattice", to_json(r.lattice)}};
  if (!r.ratios_2x.empty()) {
    j["ratios_2x"] = r.ratios_2x;
    j["max_ratio_2x"] = r.max_ratio_2x;
    j["mean_ratio_2x"] = r.mean_ratio_2x;
  }
  return j;
}

Json to_json(const RecursionTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json st{{"scale", to_string(s.scale)}, {"rule", s.rule}, {"clamped", s.clamped}};
    if (t.kind == "main") {
      st["a"] = to_string(s.a);
      st["b"] = to_string(s.b);
    }
    steps.push_back(std::move(st));
  }
  Json j{{"kind", t.kind},
         {"delta", to_string(t.delta)},
         {"n", t.n},
         {"terminal_scale", to_string(t.terminal_scale)},
         {"steps", std::move(steps)},
         {"checks", t.checks}};
  if (t.kind == "main") {
    j["params"] = Json{{"K", to_string(t.K)}, {"eps", to_string(t.eps)}, {"M", to_string(t.M)}, {"C", to_string(t.C)}};
    j["bound"] = Json{{"a", to_string(t.bound_a)},
                      {"b", to_string(t.bound_b)},
                      {"stepwise_b", to_string(t.stepwise_b)},
                      {"power_coeff", to_string(t.power_coeff)},
                      {"closed_form_coeff", to_string(t.closed_form_coeff)},
                      {"form", "a + b C delta^-eps <= power_coeff C delta^-eps <= closed_form_coeff C delta^-2eps"}};
    j["two_eps_flag"] = t.two_eps_flag;
  }
  return j;
}

Json to_json(const MinkowskiReport& r) {
  return Json{{"n", r.n},
              {"a_n_value", r.a_n},
              {"inner", r.inner ? to_json(*r.inner) : Json(nullptr)},
              {"horizontal_ok", r.horizontal_ok},
              {"grid_ratio", r.grid_ratio},
              {"certified_ratio", r.certified_ratio},
              {"closed_form_ratio", r.closed_form_ratio},
              {"contained", r.contained}};
}

Json to_json(const OverlapReport& r, double x_len) {
  Json cells = Json::array();
  for (const auto& e : r.cells) cells.push_back(Json{{"k", e.k}, {"overlapping", e.overlapping}});
  return Json{{"x_len", x_len}, {"adjacent_only", r.adjacent_only}, {"cells", std::move(cells)}};
}

Json to_json(const Parallelogram& p) {
  return Json{{"cell", to_json(p.base)},   {"center", p.center},
              {"slope", p.slope},          {"intercept", p.intercept},
              {"half_height", p.half_height}, {"required_half_height", p.required_half_height},
              {"area", p.area()}};
}

Interval interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaViolation("interval must be [lo, hi]");
  const double lo = j[0].get<double>();
  const double hi = j[1].get<double>();
  if (!(lo < hi)) throw SchemaViolation("interval needs lo < hi");
  return Interval(lo, hi);
}

Json cuts_json(const Partition& P) {
  return Json(std::vector<double>(P.cuts.begin() + 1, P.cuts.end()));
}

Partition partition_from_json(const Json& j) {
  if (!j.contains("base") || !j.contains("cuts")) throw SchemaViolation("partition needs base and cuts");
  const Interval base = interval_from_json(j["base"]);
  std::vector<double> cuts{base.lo};
  for (const auto& c : j["cuts"]) {
    if (!c.is_number()) throw SchemaViolation("cuts must be numbers");
    cuts.push_back(c.get<double>());
  }
  const double r = j.contains("delta") && j["delta"].is_number() ? j["delta"].get<double>() : 0.0;
  Partition P(base, std::move(cuts), r);
  try {
    P.validate();
  } catch (const PreconditionViolated& e) {
    throw SchemaViolation(std::string("partition file: ") + e.what());
  }
  return P;
}

std::string estimate_csv(const std::vector<DecouplingReport>& reports) {
  std::ostringstream os;
  os << kEstimateCsvHeader << "\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : reports) {
    os << quote(r.phase_id) << ',' << quote(r.partition_id) << ',' << format_double(r.p) << ','
       << format_double(r.delta) << ',' << format_double(1.0 / r.delta) << ',' << r.trials << ','
       << to_string(r.model) << ',' << r.seed << ',' << format_double(r.max_ratio) << ','
       << format_double(r.mean_ratio) << ',';
    if (r.ratios_2x.empty()) os << ",,";
    else os << format_double(r.max_ratio_2x) << ',' << format_double(r.mean_ratio_2x) << ',';
    os << r.cells << ',' << r.underresolved_cells << "\n";
  }
  return os.str();
}

}  // namespace polydec
