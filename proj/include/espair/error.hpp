#pragma once

#include <stdexcept>
#include <string>

namespace espair {

/// Error type thrown by every operation in this library. The message is
/// always prefixed with the operation that failed.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  Error(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

}  // namespace espair
