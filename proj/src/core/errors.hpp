#pragma once

#include <stdexcept>
#include <string>

namespace mhht {

// Bad input: malformed values, violated preconditions, inconsistent config.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem and serialization failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mhht
