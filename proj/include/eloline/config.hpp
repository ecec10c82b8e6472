#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "eloline/types.hpp"

namespace eloline {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Key/value run configuration. File syntax: one `key = value` per line,
// `#` comments, blank lines ignored. Mode-specific keys take a `spread.`
// or `total.` prefix; bare hyperparameter keys set both modes.
struct Config {
  HyperParams spread{.r_hfa = 54.0};
  HyperParams total{.regress_fraction = 0.7};
  int half_lines = 50;
  double spacing = 1.0;
  std::uint64_t seed = 2024;
  long burn_in_games = -1;      // -1: burn in on the first season found
  std::string init = "minbias";  // or "flat" (every line starts at r0)
  bool history = true;

  // Optional paths; CLI positionals take precedence.
  std::string games_path;
  std::string book_path;
  std::string out_prefix = "out";

  HyperParams& params(ComparisonMode m) { return m == ComparisonMode::spread ? spread : total; }
  const HyperParams& params(ComparisonMode m) const {
    return m == ComparisonMode::spread ? spread : total;
  }

  void validate() const;
};

Config load_config(const std::string& path);

// Applies one `key=value` pair (the `--set` flag). Unknown keys raise
// ConfigError naming the key.
void apply_override(Config& cfg, const std::string& assignment);

// Every accepted key with its resolved value, one per line, parseable by
// load_config. Emitted alongside command outputs for reproducibility.
std::string resolved_config_text(const Config& cfg);

}  // namespace eloline
