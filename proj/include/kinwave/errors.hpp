#pragma once

#include <stdexcept>
#include <string>

namespace kinwave {

// Bad user input: malformed measures, parameters out of range, invalid config.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// The computation itself failed: lost bracket, degenerate null space, blow-up.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kinwave
