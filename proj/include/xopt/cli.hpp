#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xopt::cli {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

/// Runs one command line (without the program name). JSON results go to out,
/// diagnostics to err; files land in --out (default ".").
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace xopt::cli
