#pragma once

#include <iosfwd>

namespace dea::cli {

// Runs the command-line tool. Streams are injected so tests can capture
// output without spawning a process.
//
// Exit codes:
//   0  success
//   1  validation / numerical failure (message on err)
//   2  usage error (unknown flag, missing argument, bad subcommand)
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace dea::cli
