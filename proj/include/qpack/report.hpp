#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qpack {

using Json = nlohmann::json;

// One named pass/fail comparison inside a report.
struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double expected = 0.0;
    double tol = 0.0;

    Json to_json() const {
        return Json{{"name", name}, {"pass", pass},     {"value", value},
                    {"expected", expected}, {"tol", tol}};
    }
};

inline Check check_close(const std::string& name, double value, double expected, double tol) {
    return Check{name, std::abs(value - expected) <= tol, value, expected, tol};
}

inline Check check_true(const std::string& name, bool ok) {
    return Check{name, ok, ok ? 1.0 : 0.0, 1.0, 0.0};
}

inline Check check_leq(const std::string& name, double value, double bound) {
    return Check{name, value <= bound, value, bound, 0.0};
}

// Structured record of a protocol/algorithm run: parameters, per-trial
// records (when requested), aggregates and closed-form reference values with
// deviations.
struct ExperimentReport {
    std::string name;
    Json params = Json::object();
    Json per_trial = Json::array();
    Json aggregates = Json::object();
    Json reference = Json::object();
    Json deviation_sigma = Json::object();
    std::vector<Check> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    Json to_json() const {
        Json out{{"schema", 1},
                 {"protocol", name},
                 {"params", params},
                 {"aggregates", aggregates},
                 {"reference", reference},
                 {"deviation_sigma", deviation_sigma},
                 {"all_passed", all_passed()}};
        if (!per_trial.empty()) out["per_trial"] = per_trial;
        out["checks"] = Json::array();
        for (const auto& c : checks) out["checks"].push_back(c.to_json());
        return out;
    }
};

}  // namespace qpack
