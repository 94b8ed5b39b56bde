#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rloop {

/// CLI entry point, callable from tests. Returns the process exit code:
/// 0 success, 2 validation, 3 not well-defined, 4 irreducible denominator,
/// 5 I/O, 1 anything else.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rloop
