#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// The `qrel` command line: check, eval, verify and selftest over .qrel files,
// with human-readable or JSON reports.

namespace qrel {

enum ExitCode : int { Ok = 0, Failed = 1, InputError = 2, Unstable = 3 };

// Combines per-item codes: input errors win over failures, failures over
// instability.
int merge_exit(int a, int b);

struct RunConfig
{
  enum class Output { Human, Json };
  std::string command; // check | eval | verify | selftest
  std::vector<std::string> inputs;
  std::string formula;
  std::string context; // "x:X,y:Y*"
  std::string kind;
  std::vector<std::string> names;
  std::optional<double> tol; // pass threshold; the warn band ends at 100 * tol
  std::uint64_t seed = 20261016;
  Output output = Output::Human;
};

inline constexpr double kMinTol = 1e-12;
inline constexpr double kMaxTol = 1e-4;

// Runs one command and writes its report to `out`, diagnostics to `err`.
int run(RunConfig const &cfg, std::ostream &out, std::ostream &err);

// argv front end: parses arguments (QREL_TOL is read here) and calls run().
int cli_main(int argc, char const *const *argv, std::ostream &out, std::ostream &err);

} // namespace qrel
