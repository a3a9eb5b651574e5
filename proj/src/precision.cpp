#include <cstdlib>
#include <string>

#include "spectramp/types.hpp"

namespace spectramp {

Precision precision_from_env() {
    const char* v = std::getenv("SPECTRAMP_PRECISION");
    if (!v || !*v) return Precision::automatic;
    std::string s(v);
    if (s == "f64") return Precision::f64;
    if (s == "extended") return Precision::extended;
    throw PreconditionError("SPECTRAMP_PRECISION must be f64 or extended, got '" + s + "'");
}

bool use_extended(int degree) {
    switch (precision_from_env()) {
    case Precision::f64:
        return false;
    case Precision::extended:
        return true;
    default:
        return degree > 60;
    }
}

} // namespace spectramp
