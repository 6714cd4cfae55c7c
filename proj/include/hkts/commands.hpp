#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hkts/config.hpp"

namespace hkts::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kVerificationFailed = 2,
    kIoError = 3,
};

int cmd_bounds(const CliConfig& config, std::ostream& out);
int cmd_simulate(const CliConfig& config, std::ostream& out);
int cmd_ensemble(const CliConfig& config, std::ostream& out);
int cmd_verify(const CliConfig& config, std::ostream& out);
int cmd_sweep(const CliConfig& config, std::ostream& out);

/// Parses argv (args[0] is the program name), dispatches, and maps errors to
/// exit codes. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hkts::cli
