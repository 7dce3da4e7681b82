#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rankone/experiment.hpp"

namespace rankone {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Flat `key = value` experiment configuration. Blank lines and `#` comments
// are ignored. Keys: ratios (comma separated), m, n, trials, variant,
// start_policy, k, field, seed, output.

/// Sets one field from its textual form.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies every line of `in` on top of `config`; errors carry the line number.
void read_config(std::istream& in, ExperimentConfig& config, bool& seed_seen);

ExperimentConfig load_config(const std::filesystem::path& path, bool& seed_seen);

} // namespace rankone
