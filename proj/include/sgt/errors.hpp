#pragma once

#include <stdexcept>
#include <string>

namespace sgt {

// Bad parameters or malformed config text. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration or memory guard tripped. CLI exit code 3.
struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File read/write failure. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sgt
