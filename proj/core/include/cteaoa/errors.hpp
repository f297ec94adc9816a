// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cteaoa {

/// Invalid configuration or violated type invariant.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed packet dump or profile table.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The input carries no usable directional or positional information
/// (cancelling averages, flat objectives, zero-signal profiles).
class DegenerateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace cteaoa
