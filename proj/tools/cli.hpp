#pragma once
// Command-line front end: validate, run, infer, sweep.
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace sopra::cli {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kInvalid = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sopra::cli
