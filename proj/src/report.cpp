#include "hghz/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace hghz {

nlohmann::json report_base(const std::string& kind, uint64_t seed, const std::string& regime) {
    nlohmann::json j;
    j["kind"] = kind;
    j["seed"] = seed;
    j["regime"] = regime;
    j["code_version"] = kCodeVersion;
    if (regime == "toy") j["security"] = "vacuous";
    return j;
}

void stamp_time(nlohmann::json& report) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    report["generated_at_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
}

static nlohmann::json num_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

nlohmann::json plan_to_json(const PlanReport& rep) {
    nlohmann::json j;
    j["inputs"] = {{"N", rep.inputs.N}, {"eps", rep.inputs.epsilon}, {"n", rep.inputs.n}};
    j["derived"] = {{"k", rep.k},
                    {"log2_q", rep.log2_q},
                    {"log2_alpha_q", num_or_null(rep.log2_alpha_q)},
                    {"log2_r_max", num_or_null(rep.log2_r_max)},
                    {"log2_r_safe", num_or_null(rep.log2_r_safe)},
                    {"log2_mu", num_or_null(rep.log2_mu)},
                    {"log2_delta_m", num_or_null(rep.log2_delta_m)}};
    j["feasible"] = rep.feasible;
    j["first_violation"] = rep.first_violation;
    return j;
}

static bool type_matches(const std::string& spec, const nlohmann::json& v) {
    size_t pos = 0;
    while (pos <= spec.size()) {
        size_t bar = spec.find('|', pos);
        std::string t = spec.substr(pos, bar == std::string::npos ? bar : bar - pos);
        bool ok = (t == "null" && v.is_null()) || (t == "string" && v.is_string()) ||
                  (t == "boolean" && v.is_boolean()) || (t == "number" && v.is_number()) ||
                  (t == "integer" && v.is_number_integer()) || (t == "object" && v.is_object()) ||
                  (t == "array" && v.is_array());
        if (ok) return true;
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    return false;
}

bool validate_schema(const nlohmann::json& schema, const nlohmann::json& doc, std::string* error) {
    if (schema.contains("type")) {
        std::string t = schema["type"].get<std::string>();
        if (!type_matches(t, doc)) {
            if (error) *error = "type mismatch: expected " + t;
            return false;
        }
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!doc.is_object() || !doc.contains(key.get<std::string>())) {
                if (error) *error = "missing required field: " + key.get<std::string>();
                return false;
            }
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (!doc.contains(it.key())) continue;
            if (!validate_schema(it.value(), doc[it.key()], error)) {
                if (error) *error = it.key() + ": " + *error;
                return false;
            }
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (const auto& el : doc)
            if (!validate_schema(schema["items"], el, error)) return false;
    }
    return true;
}

bool validate_report(const nlohmann::json& report, const std::string& schema_dir,
                     std::string* error) {
    if (!report.contains("kind") || !report["kind"].is_string()) {
        if (error) *error = "report has no kind";
        return false;
    }
    std::string path = schema_dir + "/" + report["kind"].get<std::string>() + ".schema.json";
    std::ifstream f(path);
    if (!f) {
        if (error) *error = "no schema found at " + path;
        return false;
    }
    nlohmann::json schema = nlohmann::json::parse(f);
    return validate_schema(schema, report, error);
}

} // namespace hghz
