#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spectramp::cli {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string num(long v) { return std::to_string(v); }

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string to_csv(const Table& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return os.str();
}

std::string to_svg(const Plot& p) {
    const double w = 480, h = 320, m = 50;
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : p.points)
        if (x > 0 && y > 0) pts.emplace_back(std::log10(x), std::log10(y));
    std::sort(pts.begin(), pts.end());
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m / 2 << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m / 2 << "\" x2=\"" << m << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">log10 " << p.x_label
       << "</text>\n";
    os << "<text x=\"14\" y=\"" << h / 2 << "\" transform=\"rotate(-90 14 " << h / 2
       << ")\" text-anchor=\"middle\">log10 " << p.y_label << "</text>\n";
    if (!pts.empty()) {
        double x0 = pts.front().first, x1 = pts.back().first, y0 = pts.front().second, y1 = y0;
        for (auto [x, y] : pts) {
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 - x0 < 1e-12) x1 = x0 + 1;
        if (y1 - y0 < 1e-12) y1 = y0 + 1;
        auto sx = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 1.5 * m); };
        auto sy = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 1.5 * m); };
        os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : pts) os << num(sx(x)) << ',' << num(sy(y)) << ' ';
        os << "\"/>\n";
        for (auto [x, y] : pts)
            os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"steelblue\"/>\n";
        os << "<text x=\"" << m << "\" y=\"" << h - m + 16 << "\">" << num(x0) << "</text>\n";
        os << "<text x=\"" << w - m << "\" y=\"" << h - m + 16 << "\">" << num(x1) << "</text>\n";
        os << "<text x=\"" << m + 4 << "\" y=\"" << m / 2 + 10 << "\">" << num(y1) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

} // namespace spectramp::cli
