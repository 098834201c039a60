#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commsol::cli {

/// Runs one command line (without the program name). Exit codes: 0 on
/// success, 1 on a domain error or a failed check, 2 on a usage error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Runs a fixed set of commands with --format lines, re-parses every printed
/// value and compares. Prints one line per command; true when all agree.
bool round_trip(std::ostream &log);

} // namespace commsol::cli
