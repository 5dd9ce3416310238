#pragma once

#include <stdexcept>
#include <string>

namespace gcurrents {

/// Malformed or inconsistent input: dimension mismatches, invalid
/// boundaries, trees that are not trees, partitions with gaps.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative method ran out of iterations before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A search exceeded its configured node budget.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcurrents
