#pragma once
// Experiment configuration: a JSON object from --config plus flat --key value overrides.
// Every key an experiment reads is declared with a default; leftovers are rejected by finish().

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spectramp::cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Config {
  public:
    /// Empty path gives an empty configuration.
    static Config load(const std::string& path);
    static Config from_json(nlohmann::json j, std::string origin = "<inline>");

    /// The value is parsed as JSON when possible (numbers, lists, booleans) and kept as a string otherwise.
    void set_override(const std::string& key, const std::string& raw);

    double real(const std::string& key, double def);
    double positive(const std::string& key, double def);
    double nonnegative(const std::string& key, double def);
    int integer(const std::string& key, int def, int min);
    bool flag(const std::string& key, bool def);
    std::string text(const std::string& key, const std::string& def);
    std::string choice(const std::string& key, const std::string& def, const std::set<std::string>& allowed);
    /// A scalar is accepted as a one-element list.
    std::vector<double> reals(const std::string& key, const std::vector<double>& def);
    std::vector<double> positive_reals(const std::string& key, const std::vector<double>& def);
    std::vector<int> integers(const std::string& key, const std::vector<int>& def, int min);

    /// Throws ConfigError naming every key that no getter asked for.
    void finish() const;
    /// Declared keys with their effective values.
    const nlohmann::json& resolved() const { return resolved_; }

  private:
    const nlohmann::json* lookup(const std::string& key);
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    nlohmann::json values_ = nlohmann::json::object();
    std::map<std::string, std::string> origin_;
    std::set<std::string> declared_;
    nlohmann::json resolved_ = nlohmann::json::object();
};

} // namespace spectramp::cli
