#pragma once

#include <iostream>

namespace sorptran {

/// Command-line entry point. Exit codes: 0 success, 1 invalid input or I/O failure,
/// 2 solver failure (non-convergence or an unstable explicit run).
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace sorptran
