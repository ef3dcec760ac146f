#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semcom/experiment.hpp"

namespace semcom {

enum class ConfigErrorKind { kMissingFile, kParse, kUnknownKey, kRange };

struct ConfigError : std::runtime_error {
  ConfigError(ConfigErrorKind kind_, const std::string& message, int line_ = 0)
      : std::runtime_error(message), kind(kind_), line(line_) {}
  ConfigErrorKind kind;
  int line;  // 1-based; 0 when not tied to a line
};

/// Applies one dotted key to the config. `compute.f_local_hz` and
/// `compute.f_edge_hz` are accepted as sugar setting both range bounds.
/// Throws ConfigError (kUnknownKey or kParse) on bad input.
void apply_config_key(ScenarioConfig& config, const std::string& key,
                      const std::string& value, int line = 0);

/// Parses `key = value` lines ('#' comments, blank lines allowed) on top of
/// the defaults, then validates ranges. An empty file yields the default
/// scenario unchanged.
ScenarioConfig parse_config_text(const std::string& text);

/// parse_config_text over a file; ConfigError(kMissingFile) when unreadable.
ScenarioConfig parse_config_file(const std::string& path);

/// Canonical flat key/value echo of a config. Re-applying the pairs onto a
/// default config reproduces it exactly (doubles are printed with shortest
/// round-trip formatting).
std::vector<std::pair<std::string, std::string>> echo_config(
    const ScenarioConfig& config);

/// Rebuilds a config from echoed pairs (defaults plus overrides).
ScenarioConfig config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs);

/// Locale-independent shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace semcom
