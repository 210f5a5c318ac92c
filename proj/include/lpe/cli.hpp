#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpe {

/// Exit codes: 0 success, 1 assertion or computation failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpe
