// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cteaoa::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kIoError = 1,          // unreadable input or unwritable output
    kConfigError = 2,      // bad flags, config file or violated invariant
    kFormatError = 3,      // malformed dump or profile table
    kDegenerate = 4,       // no directional / positional information
};

/// Entry point of the `cteaoa` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cteaoa::cli
