#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace btfcli {

enum ExitCode : int { kOk = 0, kFailure = 1, kSchema = 2, kNumeric = 3, kConfig = 4 };

/// Parses arguments and runs one subcommand. Messages go to `out`/`err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace btfcli
