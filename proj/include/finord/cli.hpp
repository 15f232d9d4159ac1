#pragma once

#include <ostream>

namespace finord {

/// Command-line entry point. Exit codes: 0 success, 1 input or domain error
/// (message on `err`), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace finord
