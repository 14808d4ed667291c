#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaussmom::cli {

/// Runs the command line `args` (without the program name).
/// Exit status: 0 success, 1 verification mismatch or non-PSD covariance,
/// 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussmom::cli
