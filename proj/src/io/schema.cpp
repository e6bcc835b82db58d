#include "polydec/io/schema.hpp"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include <map>
#include <memory>
#include <mutex>

#include "polydec/errors.hpp"

namespace polydec {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kSchemas[];
extern const std::size_t kSchemaCount;
}  // namespace detail

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::kSchemaCount; ++i) out.emplace_back(detail::kSchemas[i].first);
  return out;
}

std::string_view schema_text(std::string_view name) {
  for (std::size_t i = 0; i < detail::kSchemaCount; ++i)
    if (detail::kSchemas[i].first == name) return detail::kSchemas[i].second;
  throw SchemaViolation("unknown schema: " + std::string(name));
}

namespace {

const rapidjson::SchemaDocument& compiled(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<rapidjson::SchemaDocument>, std::less<>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return *it->second;
  rapidjson::Document d;
  const std::string_view text = schema_text(name);
  d.Parse(text.data(), text.size());
  if (d.HasParseError())
    throw SchemaViolation("embedded schema " + std::string(name) + " does not parse: " +
                          rapidjson::GetParseError_En(d.GetParseError()));
  auto doc = std::make_unique<rapidjson::SchemaDocument>(d);
  return *cache.emplace(std::string(name), std::move(doc)).first->second;
}

}  // namespace

void validate_json_text(std::string_view text, std::string_view schema) {
  rapidjson::Document d;
  d.Parse(text.data(), text.size());
  if (d.HasParseError())
    throw SchemaViolation(std::string("JSON parse error at offset ") + std::to_string(d.GetErrorOffset()) + ": " +
                          rapidjson::GetParseError_En(d.GetParseError()));
  rapidjson::SchemaValidator v(compiled(schema));
  if (!d.Accept(v)) {
    rapidjson::StringBuffer where, rule;
    v.GetInvalidDocumentPointer().StringifyUriFragment(where);
    v.GetInvalidSchemaPointer().StringifyUriFragment(rule);
    throw SchemaViolation("document fails schema " + std::string(schema) + ": keyword '" +
                          v.GetInvalidSchemaKeyword() + "' at " + where.GetString() + " (schema " +
                          rule.GetString() + ")");
  }
}

void validate_json(const Json& doc, std::string_view schema) { validate_json_text(doc.dump(), schema); }

}  // namespace polydec
