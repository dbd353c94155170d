#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace balens {

enum class Subcommand { synth, preprocess, evaluate, report };

// One parsed command-line run. `flags` holds the fully resolved settings in
// string form after precedence is applied: explicit flag, then config file
// entry, then BALENS_SEED (seed only), then the built-in default. Unknown
// flags and unknown config keys are rejected, never ignored.
struct CliInvocation {
  Subcommand subcommand = Subcommand::synth;
  std::map<std::string, std::string> flags;
  int exit_code = 0;
};

// Subcommand bodies. They assume a resolved invocation and throw
// balens::Error subtypes on failure; run_cli maps those to exit codes.
int cmd_synth(const CliInvocation& inv, std::ostream& out);
int cmd_preprocess(const CliInvocation& inv, std::ostream& out);
int cmd_evaluate(const CliInvocation& inv, std::ostream& out);
int cmd_report(const CliInvocation& inv, std::ostream& out);

// Full driver: parse, resolve, dispatch. Returns 0 on success (including
// --help), 2 on usage or configuration errors, 1 on runtime failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: argument list without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace balens
