#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cshor::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kInvalidInput = 2,
    kBudgetExhausted = 3,
};

/// Error carrying the process exit code it maps to.
class CliError : public std::runtime_error {
   public:
    CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const { return code_; }

   private:
    ExitCode code_;
};

/// Parses argv and runs one subcommand; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cshor::cli
