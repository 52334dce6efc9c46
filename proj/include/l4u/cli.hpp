#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l4u {

/// Exit codes shared by every subcommand.
enum ExitCode : int { exit_ok = 0, exit_claim_failed = 1, exit_usage = 2, exit_runtime = 3 };

/// Runs the `l4u` command line (gen, learn, verify, ber). `args` excludes the
/// program name. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a..b" (inclusive), "a..b:step" and comma lists of either.
std::vector<double> parse_range(const std::string& text);

}  // namespace l4u
