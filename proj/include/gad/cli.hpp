#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace gad {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,     ///< bad arguments or configuration
    kExitData = 2,      ///< unreadable or malformed input
    kExitNumerical = 3  ///< a loss went NaN/Inf
};

/// Flat "key = value" file; '#' starts a comment line. Throws ConfigError with
/// file:line on a malformed or repeated key.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Entry point for the gad tool: preprocess | run | report.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gad
