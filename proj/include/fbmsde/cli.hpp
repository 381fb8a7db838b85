#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fbmsde::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kRuntimeError = 2;

/// Parses argv (argv[0] is the program name), runs the subcommand and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SubcommandFlags {
    std::string name;
    std::vector<std::string> flags;  // long names, e.g. "--hurst"
};

/// Flags accepted by each subcommand, read back from the parser itself.
std::vector<SubcommandFlags> flag_registry();

}  // namespace fbmsde::cli
