// spectramp <experiment> --config path [--key value]...
// Exit codes: 0 all contracts held, 1 a contract failed, 2 configuration error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "output.hpp"
#include "spectramp/types.hpp"

namespace cli = spectramp::cli;

namespace {

// Flat "--key value" or "--key=value" pairs left over after CLI11 parsing.
void apply_overrides(cli::Config& cfg, const std::vector<std::string>& extra) {
    for (std::size_t i = 0; i < extra.size(); ++i) {
        const std::string& a = extra[i];
        if (a.rfind("--", 0) != 0) throw cli::ConfigError("unexpected argument '" + a + "'");
        const std::string body = a.substr(2);
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
            cfg.set_override(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        if (i + 1 >= extra.size()) throw cli::ConfigError("option '" + a + "' needs a value");
        cfg.set_override(body, extra[++i]);
    }
}

std::string precision_name() {
    switch (spectramp::precision_from_env()) {
    case spectramp::Precision::f64:
        return "f64";
    case spectramp::Precision::extended:
        return "extended";
    default:
        return "automatic";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform spectral amplification experiments"};
    std::string experiment, config_path;
    app.add_option("experiment", experiment, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(cli::experiment_names()));
    app.add_option("--config", config_path, "JSON configuration file");
    app.allow_extras();
    app.footer("Any configuration key can be overridden with --key value.\n"
               "SPECTRAMP_PRECISION=f64|extended selects the working precision.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cli::Outcome outcome;
    std::string out_dir, precision;
    bool svg = false, timings = false;
    double elapsed_ms = 0;
    nlohmann::json resolved;
    try {
        precision = precision_name();
        cli::Config cfg = cli::Config::load(config_path);
        apply_overrides(cfg, app.remaining());
        out_dir = cfg.text("output_dir", ".");
        svg = cfg.flag("svg", false);
        timings = cfg.flag("timings", false);
        const auto t0 = std::chrono::steady_clock::now();
        outcome = cli::run_experiment(experiment, cfg);
        elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        resolved = cfg.resolved();
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spectramp::PreconditionError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << experiment << ": " << e.what() << '\n';
        return 1;
    }

    try {
        std::filesystem::create_directories(out_dir);
        const std::string base = (std::filesystem::path(out_dir) / experiment).string();
        cli::write_file(base + ".csv", cli::to_csv(outcome.table));
        nlohmann::json summary = {{"experiment", experiment},
                                  {"config", resolved},
                                  {"precision", precision},
                                  {"passed", outcome.passed},
                                  {"summary", outcome.summary}};
        if (timings) summary["elapsed_ms"] = elapsed_ms;
        cli::write_file(base + ".json", summary.dump(2) + "\n");
        if (svg) cli::write_file(base + ".svg", cli::to_svg(outcome.plot));
        std::cout << experiment << ": " << (outcome.passed ? "PASS" : "FAIL") << " (" << outcome.table.rows.size()
                  << " points) -> " << base << ".csv\n";
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 2;
    }
    return outcome.passed ? 0 : 1;
}
