#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polydec/io/json_io.hpp"

namespace polydec {

/// Embedded schema names: config, partition, badset, neighborhood, estimate,
/// bootstrap, appendix.
std::vector<std::string> schema_names();
std::string_view schema_text(std::string_view name);

/// Throws SchemaViolation naming the failing keyword and JSON pointer.
void validate_json(const Json& doc, std::string_view schema);
void validate_json_text(std::string_view text, std::string_view schema);

}  // namespace polydec
