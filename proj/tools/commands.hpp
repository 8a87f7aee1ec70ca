#pragma once

#include "cli_options.hpp"

#include <iosfwd>

namespace bellsim::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitRuntime = 2,
};

/// Executes a parsed run. Results go to options.out_dir; progress lines to
/// `log`.
int run(const CliOptions& options, std::ostream& log);

/// Full front end: parse, validate, run. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bellsim::cli
