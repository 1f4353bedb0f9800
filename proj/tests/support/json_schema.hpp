#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace prepot::testing {

/// Validates `doc` against the keyword subset used by report.schema.json:
/// type, required, properties, additionalProperties (false), items, enum,
/// minimum, maximum, minLength. Returns one message per violation.
std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& doc);

}  // namespace prepot::testing
