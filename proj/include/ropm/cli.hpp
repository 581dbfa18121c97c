#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ropm::cli {

/// Runs one `ropm` subcommand (solve, bench, ablate, landscape, detune, gen).
/// Returns the process exit status; diagnostics go to `err`, summaries to
/// `out`. Report files are written atomically and only on success.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ropm::cli
