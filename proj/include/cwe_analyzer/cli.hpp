#pragma once

#include <ostream>

namespace cwe_analyzer {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,  // malformed feed, invalid catalog, failed fetch, unwritable output
  kExitUsage = 2,
};

/// Entry point of `cwe-analyzer fetch|rank|coverage`. Human-readable tables
/// go to `out`; diagnostics (`WARN ...` lines) and errors go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwe_analyzer
