#include "spectral/verification.hpp"

#include <json.hpp>

namespace spectral {

std::string to_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["anchor"] = c.anchor;
        row["defect"] = c.defect;
        row["tol"] = c.tol;
        row["pass"] = c.pass;
        j["checks"].push_back(row);
    }
    j["pass"] = report.pass();
    return j.dump(2);
}

}  // namespace spectral
