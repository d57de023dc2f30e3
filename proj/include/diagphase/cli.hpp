#pragma once

#include <iosfwd>

namespace diagphase {

// Exit codes: 0 success, 1 usage or input error, 2 verification failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diagphase
