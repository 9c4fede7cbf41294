#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mscf {

/// Exit codes of run_cli.
enum CliExit : int {
  kExitOk = 0,
  kExitFailure = 1,      // tracking or evaluation failed
  kExitMissingPath = 2,  // an input file or directory does not exist
  kExitBadInput = 3,     // malformed config, spec, ground truth or predictions
  kExitUsage = 64,
};

/// Entry point of the `mscf` tool. Subcommands: track, eval, bench, synth.
/// Failures print exactly one line to `err`:
///   {"error":"<kind>","message":"...","path":"..."}
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mscf
