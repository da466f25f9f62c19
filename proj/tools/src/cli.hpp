#pragma once

#include <iosfwd>

namespace mderank::cli {

/// Runs the mderank command line. Returns 0 on success, 2 for usage or
/// configuration errors (unknown flag, missing file, invalid setting) and 1
/// for failures while processing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mderank::cli
