#pragma once

#include <ostream>

namespace ww {

// Exit codes: 0 success, 2 configuration error, 3 solver error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ww
