#pragma once

#include <ostream>

namespace blindcast {

// Exit codes: 0 success, 1 invalid input or usage, 2 a size cap was hit.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blindcast
