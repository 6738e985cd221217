#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppn::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kValidationError = 2,
  kInputError = 3,
};

/// Runs one `ppn` invocation. Primary output goes to `out` when the output
/// path is "-" (the default), otherwise to a temp file renamed into place on
/// success. Diagnostics go to `err` only.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppn::cli
