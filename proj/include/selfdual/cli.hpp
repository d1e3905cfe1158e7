#pragma once

#include <iosfwd>

#include "selfdual/config.hpp"

namespace selfdual {

// Exit codes: 0 success, 1 solver did not converge, 2 schema or input
// violation, 3 unreadable or unwritable file, 4 internal error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selfdual
