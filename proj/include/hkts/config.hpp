#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hkts/harness.hpp"
#include "hkts/model.hpp"

namespace hkts::cli {

/// Bad flags, bad config values, or an invalid model. Exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable config or unwritable output. Exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Maps aliases and hyphenated spellings onto canonical keys ("eps" -> "epsilon",
/// "A" -> "truth", "tail-window" -> "tail_window"). Throws ConfigError for an
/// unknown key.
std::string canonical_key(std::string_view key);

/// Flat `key = value` text; `#` starts a comment; blank lines are ignored.
KeyValues parse_key_values(std::string_view text);

/// Reads a key-value file, or the "config" object of a JSON run manifest when
/// the path ends in ".json".
KeyValues load_config_file(const std::filesystem::path& path);

/// Fully resolved command-line configuration.
struct CliConfig {
    ModelConfig model;

    InitialCondition initial = UniformRandomInit{};
    Mode mode = Mode::iid;
    std::size_t horizon = 20000;
    std::size_t tail_window = 2000;
    std::uint64_t seed = 1;
    std::optional<double> precision;

    std::size_t runs = 50;
    std::uint64_t seed_base = 1;
    std::size_t jobs = 1;
    bool full_states = false;
    bool per_run = false;

    std::filesystem::path output_dir = "hkts-out";
    bool output_given = false;

    std::size_t trials = 1000;
    std::size_t steps = 1000;
    std::size_t noise_draws = 100000;
    bool fault_no_clamp = false;

    std::vector<double> grid_delta;
    std::vector<double> grid_alpha;
    std::vector<std::size_t> grid_m;
    std::vector<double> grid_epsilon;

    /// Canonical key-values describing this config; feeding them back through
    /// resolve() yields the same config.
    KeyValues echo;

    RunSpec run_spec() const;
};

/// Builds a CliConfig from canonical key-values over the built-in defaults
/// (n = 20, m = 10, alpha = 0.5, epsilon = 0.2, truth = 0.8, delta = 0.02).
/// Throws ConfigError naming the offending key or violated constraint.
CliConfig resolve(const KeyValues& values);

/// Shortest text that reads back as the same double.
std::string exact_number(double v);

}  // namespace hkts::cli
