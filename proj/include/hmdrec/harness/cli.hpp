#pragma once

// Command-line front end. Subcommands: generate, train, eval, calibrate,
// stream, latency, baseline, compare.

#include <iosfwd>
#include <string>
#include <vector>

namespace hmdrec::harness {

enum class ExitCode : int {
    Ok = 0,
    Runtime = 1,  // numeric failure or any other runtime error
    Usage = 2,    // unknown subcommand or flag, bad flag value
    Io = 3,       // missing or unwritable file
    Format = 4,   // malformed dataset, sample line or weight file
    Config = 5,   // inconsistent configuration
};

int run_cli(int argc, const char* const* argv);

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hmdrec::harness
