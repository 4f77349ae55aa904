#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scenvar::cli {

/// Exit codes: 0 success, 1 evaluation/validation/IO failure, 2 usage error.
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `scenvar` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scenvar::cli
