#pragma once

namespace urboot::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kValidation = 2,
    kDegenerate = 3,
    kUsage = 64,
};

/// Entry point of the `urboot` tool.
int run(int argc, const char* const* argv);

}  // namespace urboot::cli
