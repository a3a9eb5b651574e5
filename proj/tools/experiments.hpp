#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace spectramp::cli {

const std::vector<std::string>& experiment_names();

/// Reads the experiment's keys (plus seed and threads), calls cfg.finish(), then runs the sweep.
/// Library PreconditionErrors raised by parameter values propagate to the caller.
Outcome run_experiment(const std::string& name, Config& cfg);

} // namespace spectramp::cli
