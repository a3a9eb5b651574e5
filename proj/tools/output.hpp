#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spectramp::cli {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Line plot on log-log axes; points with a nonpositive coordinate are skipped.
struct Plot {
    std::string x_label, y_label;
    std::vector<std::pair<double, double>> points;
};

struct Outcome {
    Table table;
    nlohmann::json summary = nlohmann::json::object();
    bool passed = true;
    Plot plot;
};

/// Fixed formatting so identical runs give identical bytes.
std::string num(double v);
std::string num(long v);
inline std::string num(int v) { return num(static_cast<long>(v)); }
inline std::string yes(bool b) { return b ? "true" : "false"; }

std::string to_csv(const Table& t);
std::string to_svg(const Plot& p);

void write_file(const std::string& path, const std::string& text);

} // namespace spectramp::cli
