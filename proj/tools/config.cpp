#include "config.hpp"

#include <fstream>
#include <sstream>

namespace spectramp::cli {

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

Config Config::load(const std::string& path) {
    if (path.empty()) return Config{};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + line_col(text, e.byte) + ": " + e.what());
    }
    return from_json(std::move(j), path);
}

Config Config::from_json(nlohmann::json j, std::string origin) {
    if (!j.is_object()) throw ConfigError(origin + ": configuration must be a JSON object");
    Config c;
    for (auto it = j.begin(); it != j.end(); ++it) c.origin_[it.key()] = origin;
    c.values_ = std::move(j);
    return c;
}

void Config::set_override(const std::string& key, const std::string& raw) {
    if (key.empty()) throw ConfigError("empty option name");
    nlohmann::json v;
    try {
        v = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        v = raw;
    }
    values_[key] = std::move(v);
    origin_[key] = "--" + key;
}

const nlohmann::json* Config::lookup(const std::string& key) {
    declared_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &*it;
}

void Config::fail(const std::string& key, const std::string& what) const {
    auto it = origin_.find(key);
    const std::string where = it == origin_.end() ? "" : " (from " + it->second + ")";
    throw ConfigError("key '" + key + "'" + where + ": " + what);
}

double Config::real(const std::string& key, double def) {
    double v = def;
    if (const auto* j = lookup(key)) {
        if (!j->is_number()) fail(key, "expected a number, got " + j->dump());
        v = j->get<double>();
    }
    resolved_[key] = v;
    return v;
}

double Config::positive(const std::string& key, double def) {
    const double v = real(key, def);
    if (!(v > 0)) fail(key, "must be positive");
    return v;
}

double Config::nonnegative(const std::string& key, double def) {
    const double v = real(key, def);
    if (!(v >= 0)) fail(key, "must be nonnegative");
    return v;
}

int Config::integer(const std::string& key, int def, int min) {
    int v = def;
    if (const auto* j = lookup(key)) {
        if (!j->is_number_integer()) fail(key, "expected an integer, got " + j->dump());
        v = j->get<int>();
    }
    if (v < min) fail(key, "must be at least " + std::to_string(min));
    resolved_[key] = v;
    return v;
}

bool Config::flag(const std::string& key, bool def) {
    bool v = def;
    if (const auto* j = lookup(key)) {
        if (!j->is_boolean()) fail(key, "expected true or false, got " + j->dump());
        v = j->get<bool>();
    }
    resolved_[key] = v;
    return v;
}

std::string Config::text(const std::string& key, const std::string& def) {
    std::string v = def;
    if (const auto* j = lookup(key)) {
        if (!j->is_string()) fail(key, "expected a string, got " + j->dump());
        v = j->get<std::string>();
    }
    resolved_[key] = v;
    return v;
}

std::string Config::choice(const std::string& key, const std::string& def, const std::set<std::string>& allowed) {
    const std::string v = text(key, def);
    if (!allowed.count(v)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(key, "'" + v + "' is not one of " + list);
    }
    return v;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& def) {
    std::vector<double> v = def;
    if (const auto* j = lookup(key)) {
        v.clear();
        if (j->is_number()) {
            v.push_back(j->get<double>());
        } else if (j->is_array()) {
            for (const auto& e : *j) {
                if (!e.is_number()) fail(key, "expected a list of numbers, got " + j->dump());
                v.push_back(e.get<double>());
            }
        } else {
            fail(key, "expected a number or a list of numbers, got " + j->dump());
        }
    }
    resolved_[key] = v;
    return v;
}

std::vector<double> Config::positive_reals(const std::string& key, const std::vector<double>& def) {
    auto v = reals(key, def);
    for (double x : v)
        if (!(x > 0)) fail(key, "all entries must be positive");
    return v;
}

std::vector<int> Config::integers(const std::string& key, const std::vector<int>& def, int min) {
    std::vector<int> v = def;
    if (const auto* j = lookup(key)) {
        v.clear();
        auto take = [&](const nlohmann::json& e) {
            if (!e.is_number_integer()) fail(key, "expected integers, got " + j->dump());
            v.push_back(e.get<int>());
        };
        if (j->is_array()) {
            for (const auto& e : *j) take(e);
        } else {
            take(*j);
        }
    }
    for (int x : v)
        if (x < min) fail(key, "entries must be at least " + std::to_string(min));
    resolved_[key] = v;
    return v;
}

void Config::finish() const {
    std::string unknown;
    for (auto it = values_.begin(); it != values_.end(); ++it)
        if (!declared_.count(it.key())) {
            auto o = origin_.find(it.key());
            unknown += (unknown.empty() ? "" : ", ") + it.key() + " (from " + o->second + ")";
        }
    if (!unknown.empty()) throw ConfigError("unknown keys: " + unknown);
}

} // namespace spectramp::cli
