#include "modkit_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace modkit::cli {

double report_number(double v) {
    if (!std::isfinite(v)) return v;
    if (std::abs(v) < 1e-12) return 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return std::strtod(buf, nullptr);
}

CheckResult& Report::add(std::string check, bool pass, std::optional<double> residual) {
    CheckResult r;
    r.check = std::move(check);
    r.pass = pass;
    if (residual) r.residual = report_number(*residual);
    results.push_back(std::move(r));
    return results.back();
}

int Report::status() const {
    if (error) return 2;
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; }) ? 0 : 1;
}

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json out;
    out["command"] = command;
    out["instance"] = instance;
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json o;
        o["check"] = r.check;
        o["pass"] = r.pass;
        o["residual"] = r.residual ? nlohmann::ordered_json(*r.residual) : nlohmann::ordered_json(nullptr);
        o["details"] = r.details;
        rs.push_back(std::move(o));
    }
    out["results"] = std::move(rs);
    if (error) out["error"] = *error;
    const int s = status();
    out["status"] = s == 0 ? "pass" : s == 1 ? "fail" : "error";
    out["exit"] = s;
    return out;
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string residual_text(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", r);
    return buf;
}

}  // namespace

std::string Report::render(bool json) const {
    if (json) return to_json().dump(2) + "\n";
    std::ostringstream os;
    os << "modkit " << command << " " << instance << "\n";
    for (const auto& r : results) {
        os << (r.pass ? "  PASS  " : "  FAIL  ") << r.check;
        if (r.residual) os << "  residual " << residual_text(*r.residual);
        os << "\n";
        for (auto it = r.details.begin(); it != r.details.end(); ++it) {
            os << "          " << it.key() << ": " << scalar_text(*it) << "\n";
        }
    }
    if (error) os << "error: " << *error << "\n";
    const int s = status();
    os << "status: " << (s == 0 ? "pass" : s == 1 ? "fail" : "error") << "\n";
    return os.str();
}

}  // namespace modkit::cli
