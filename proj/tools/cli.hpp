#pragma once

#include <iosfwd>

namespace plantext::cli {

/// Entry point behind the `plantext` executable. Returns 0 on success,
/// 1 on an operational error and 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plantext::cli
