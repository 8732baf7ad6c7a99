#pragma once

#include <stdexcept>
#include <string>

namespace cutfn {

// Library-wide error type. The message names the offending input, field or
// parameter so callers can surface it directly.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cutfn
