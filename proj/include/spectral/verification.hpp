#pragma once

#include <string>
#include <vector>

namespace spectral {

struct CheckRow {
    std::string name;    // stable machine-readable identifier
    std::string anchor;  // the operator identity being checked, in formula form
    double defect = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CheckRow> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string name, std::string anchor, double defect, double tol) {
        checks.push_back({std::move(name), std::move(anchor), defect, tol, defect <= tol});
    }
    void append(const VerificationReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }
};

/// {"checks":[{"name","anchor","defect","tol","pass"}],"pass":bool}
std::string to_json(const VerificationReport& report);

}  // namespace spectral
