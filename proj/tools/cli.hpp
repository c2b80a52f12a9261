#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualk::cli {

// Exit codes: 0 success, 1 runtime failure, 2 invalid flags. Failures are
// reported on `err` as a single JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualk::cli
