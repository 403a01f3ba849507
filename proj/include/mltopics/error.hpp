#pragma once

#include <stdexcept>
#include <string>

namespace mltopics {

// Malformed or inconsistent input data. CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation: unknown flag, missing input file, invalid config value.
// CLI exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mltopics
