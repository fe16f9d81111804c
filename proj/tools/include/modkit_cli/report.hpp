#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace modkit::cli {

/// 3 significant digits; magnitudes below 1e-12 print as 0.
double report_number(double v);

struct CheckResult {
    std::string check;
    bool pass = true;
    std::optional<double> residual;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct Report {
    std::string command;
    std::string instance;
    std::vector<CheckResult> results;
    std::optional<std::string> error;  // input or parse error

    CheckResult& add(std::string check, bool pass, std::optional<double> residual = std::nullopt);
    /// 0 all checks pass, 1 some check failed, 2 input error.
    int status() const;

    nlohmann::ordered_json to_json() const;
    std::string render(bool json) const;
};

}  // namespace modkit::cli
