#pragma once

#include <string>
#include <string_view>

namespace polydec {

/// Log-log plot of max_ratio against inv_delta, one polyline per
/// (phase, partition, p) series, built only from an estimate CSV.
std::string svg_from_estimate_csv(std::string_view csv);

}  // namespace polydec
