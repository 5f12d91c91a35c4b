#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lapsparse::cli {

/// Runs one `lapsparse` command line (args excludes the program name).
/// Returns the process exit status: 0 iff no error diagnostic was written.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lapsparse::cli
