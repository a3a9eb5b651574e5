#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spectramp {

struct SimReport {
    long queries = 0;
    std::vector<int> degrees;
    double error_measured = -1;  // negative until measured against a reference
    double eps_requested = 0;
    double t = 0;
    double alpha = 0;
    std::map<std::string, double> timings_ms;
    nlohmann::json meta = nlohmann::json::object();

    int degree() const;
    bool passed() const { return error_measured >= 0 && error_measured <= eps_requested; }
};

nlohmann::json to_json(const SimReport& r);

} // namespace spectramp
