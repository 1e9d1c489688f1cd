#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace resample::cli {

/// Runs one command line (without the program name). Reports go to `out`
/// or to --out; errors go to `err` as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resample::cli
