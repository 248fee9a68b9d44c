#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dicke/model.hpp"

namespace dicke::app {

/// Equidistant grid [min, max] with `points` samples.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  std::vector<double> values() const;
  void validate(std::string_view name) const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

enum class OutputFormat { csv, json };
enum class SweepObservable { g2, eof };
enum class SweepCoupling { rwa, full, fixed };

struct SpectrumConfig {
  Grid omega{0.0, 2.5, 501};
  friend bool operator==(const SpectrumConfig&, const SpectrumConfig&) = default;
};

struct G2Config {
  Grid tau{0.0, 0.0, 1};  // a single point at tau = 0 gives g2(0) only
  friend bool operator==(const G2Config&, const G2Config&) = default;
};

struct QuasienergyConfig {
  Grid g{0.0, 1.0, 101};
  double crossing_tol = 1e-3;
  SweepCoupling coupling = SweepCoupling::fixed;
  friend bool operator==(const QuasienergyConfig&, const QuasienergyConfig&) = default;
};

struct SweepConfig {
  SweepObservable observable = SweepObservable::g2;
  SweepCoupling coupling = SweepCoupling::rwa;
  Grid T{0.02, 0.3, 12};
  Grid g{0.05, 1.0, 12};
  int budget = 10000;  // maximum number of grid points
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct OutputConfig {
  std::string path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  ModelParams model;
  SpectrumConfig spectrum;
  G2Config g2;
  QuasienergyConfig quasienergies;
  SweepConfig sweep;
  OutputConfig output;

  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Scalar value of the TOML subset: integer, float, boolean or string.
using Value = std::variant<std::int64_t, double, bool, std::string>;

/// Flat key/value document: "section.key" -> (value, source line).
struct Document {
  struct Entry {
    Value value;
    int line = 0;
  };
  std::map<std::string, Entry> entries;
};

/// Parses the TOML subset used by configuration files: [section] headers,
/// `key = value` pairs with numbers, booleans or basic strings, and
/// `#` comments. Throws ConfigError with the offending line number.
Document parse_toml(std::string_view text, std::string_view source = "config");

Value parse_value(std::string_view text);

RunConfig load_config(const std::string& path);
RunConfig config_from_text(std::string_view text, std::string_view source = "config");

/// Applies "section.key=value" on top of `config`.
void apply_override(RunConfig& config, std::string_view assignment);

/// TOML text that config_from_text reads back to an equal RunConfig.
std::string serialize(const RunConfig& config);

std::string_view to_string(OutputFormat f);
std::string_view to_string(SweepObservable o);
std::string_view to_string(SweepCoupling c);

}  // namespace dicke::app
