#pragma once

#include <string>

#include "hghz/planner.hpp"
#include "hghz/util.hpp"

namespace hghz {

// Every report carries {seed, regime, code_version}; toy-regime reports also
// carry the vacuous-security banner. Timestamps live in their own field so
// reports stay byte-identical for a fixed (config, seed).
nlohmann::json report_base(const std::string& kind, uint64_t seed, const std::string& regime);
void stamp_time(nlohmann::json& report);

nlohmann::json plan_to_json(const PlanReport& rep);

// Minimal structural validator for the checked-in schemas: understands
// {"type": ..., "required": [...], "properties": {...}} plus "null" unions
// written as "number|null".
bool validate_schema(const nlohmann::json& schema, const nlohmann::json& doc,
                     std::string* error = nullptr);

// schema lookup by report kind from the schemas directory
bool validate_report(const nlohmann::json& report, const std::string& schema_dir,
                     std::string* error = nullptr);

} // namespace hghz
