// The `bioamb` command line: fmt, analyze, simulate, verify.
#pragma once

#include <iosfwd>

namespace bioamb::cli {

enum ExitCode { kOk = 0, kInputError = 1, kViolation = 2 };

/// Runs one command line. Input named `-` is read from `in`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace bioamb::cli
