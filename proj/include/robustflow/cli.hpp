#pragma once

#include <ostream>

namespace robustflow::cli {

/// Exit codes: 0 success, 1 invalid or infeasible input, 2 usage or
/// internal error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robustflow::cli
