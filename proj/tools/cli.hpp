#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ietlab {

/// Runs one `ietlab` invocation; args excludes the program name.
/// Returns 0 on success, 1 on a soft failure (search came back empty, a cap
/// or a verification was hit) and 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ietlab
