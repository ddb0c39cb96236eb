#pragma once

#include <iosfwd>

namespace fo::cli {

// Exit codes: 0 success, 1 numeric failure (results are still written, with
// converged = false), 2 configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fo::cli
