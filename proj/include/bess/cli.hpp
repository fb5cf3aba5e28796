#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bess {

/// Runs the `bess` command line. Returns 0 on success, 1 on usage or
/// validation errors and 2 when a computation has no solution (infeasible
/// program, no IRR root, battery never reaches end of life).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bess
