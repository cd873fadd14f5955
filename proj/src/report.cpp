#include "dk2/report.hpp"

namespace dk2 {

std::string engine_version() { return "dk2 0.1.0"; }

Json report_envelope(const std::string& command, const Json& parameters) {
    Json rep;
    rep["schema"] = 1;
    rep["engine"] = engine_version();
    rep["command"] = command;
    rep["parameters"] = parameters;
    rep["checks"] = Json::array();
    return rep;
}

void add_check(Json& report, const std::string& name, const std::string& verdict,
               const Json& details) {
    Json c;
    c["name"] = name;
    c["verdict"] = verdict;
    if (!details.empty()) c["details"] = details;
    report["checks"].push_back(c);
}

int report_exit_code(const Json& report) {
    bool fail = false, finding = false;
    for (auto& c : report["checks"]) {
        std::string v = c["verdict"];
        fail = fail || v == "fail";
        finding = finding || v == "finding";
    }
    if (fail) return 2;
    if (finding) return 3;
    return 0;
}

} // namespace dk2
