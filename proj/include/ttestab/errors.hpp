#pragma once

#include <stdexcept>
#include <string>

namespace ttestab {

// Bad inputs: malformed files, out-of-range flags, violated preconditions.
// The CLI maps this to exit code 1.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A required computation failed to converge or produced garbage
// (power flow divergence, Newton non-convergence, singular elimination).
// The CLI maps this to exit code 2.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ttestab
