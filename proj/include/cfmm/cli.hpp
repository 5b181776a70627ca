#pragma once

#include <ostream>

namespace cfmm {

/// Entry point of the command-line tool. Exit codes: 0 success, 1 usage, parse
/// or domain error, 2 insufficient depth (quote), 3 matrix mismatch.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfmm
