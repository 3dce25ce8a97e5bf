#pragma once

#include <ostream>

namespace wmm {

/// Entry point of wmm-probe. Returns the process exit code:
/// 0 clean, 1 findings, 2 usage or program error, 3 internal invariant failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wmm
