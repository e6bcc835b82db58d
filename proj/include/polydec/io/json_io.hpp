#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "polydec/bootstrap.hpp"
#include "polydec/decoupling.hpp"
#include "polydec/neighborhood.hpp"
#include "polydec/partition.hpp"
#include "polydec/phase_analysis.hpp"

namespace polydec {

using Json = nlohmann::json;

/// Keys sorted, floats in shortest round-trip form, trailing newline.
std::string dump_json(const Json& j);

Json to_json(const Interval& I);
Json to_json(const Rational& q);  // "p/q"
Json to_json(const kernels::LatticeSpec& spec);
Json to_json(const DecouplingReport& r);
Json to_json(const RecursionTrace& t);
Json to_json(const MinkowskiReport& r);
Json to_json(const OverlapReport& r, double x_len);
Json to_json(const Parallelogram& p);

Interval interval_from_json(const Json& j);

/// Cells of a partition report: base plus right endpoints a_1 .. a_n.
Partition partition_from_json(const Json& j);
Json cuts_json(const Partition& P);

/// One row per report: phase,partition,p,delta,inv_delta,trials,model,seed,
/// max_ratio,mean_ratio,max_ratio_2x,mean_ratio_2x,cells,underresolved_cells
std::string estimate_csv(const std::vector<DecouplingReport>& reports);
inline constexpr const char* kEstimateCsvHeader =
    "phase,partition,p,delta,inv_delta,trials,model,seed,max_ratio,mean_ratio,max_ratio_2x,"
    "mean_ratio_2x,cells,underresolved_cells";

/// Shortest round-trip decimal of a double.
std::string format_double(double x);

}  // namespace polydec
