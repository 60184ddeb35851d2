#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqg {

/// Runs the command-line interface on the given arguments (without the
/// program name). Returns 0 on success, 1 when a validation or check fails,
/// and 2 on usage or input errors.
int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err);

}  // namespace cqg
