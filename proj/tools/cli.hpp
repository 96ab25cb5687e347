#pragma once

#include <ostream>

namespace wmcs {

// Parses the command line, runs the subcommand and returns the exit code:
// 0 on success, 1 on a statistical degeneracy, 2 on usage or I/O errors.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wmcs
