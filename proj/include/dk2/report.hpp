#pragma once

#include <json.hpp>

#include <string>

namespace dk2 {

using Json = nlohmann::ordered_json;

std::string engine_version();

// schema-versioned report envelope with deterministic field order
Json report_envelope(const std::string& command, const Json& parameters);

// verdict is "pass", "fail" or "finding"
void add_check(Json& report, const std::string& name, const std::string& verdict,
               const Json& details = Json::object());

// 0 all-pass, 2 any fail, 3 finding without fail
int report_exit_code(const Json& report);

} // namespace dk2
