#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace bladegauge::app {

using json = nlohmann::json;

struct SchemaViolation {
  std::string pointer;  ///< JSON pointer into the document, "" for the root
  std::string message;
};

/// Validates against the subset of JSON Schema used by the shipped schemas:
/// type, enum, properties, required, additionalProperties (boolean), items,
/// minItems, maxItems, minimum, maximum, exclusiveMinimum, exclusiveMaximum
/// and minLength. Annotation keywords are ignored.
std::vector<SchemaViolation> validate(const json& schema, const json& doc);

/// Throws std::logic_error naming the first keyword outside the subset.
void check_schema_keywords(const json& schema, const std::string& where = "");

/// RFC 6901 escaping of one reference token.
std::string escape_pointer_token(const std::string& token);

}  // namespace bladegauge::app
