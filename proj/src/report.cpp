#include "spectramp/report.hpp"

#include <algorithm>

namespace spectramp {

int SimReport::degree() const { return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end()); }

nlohmann::json to_json(const SimReport& r) {
    nlohmann::json j = {{"degree", r.degree()},
                        {"degrees", r.degrees},
                        {"queries", r.queries},
                        {"error_measured", r.error_measured},
                        {"eps_requested", r.eps_requested},
                        {"t", r.t},
                        {"alpha", r.alpha},
                        {"timings_ms", r.timings_ms}};
    if (!r.meta.empty()) j["meta"] = r.meta;
    return j;
}

} // namespace spectramp
