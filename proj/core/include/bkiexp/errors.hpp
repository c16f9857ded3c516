#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bkiexp {

// Argument validation failures use std::invalid_argument, out-of-bounds cell
// access uses std::out_of_range. The types below cover the remaining classes.

class InvalidPoseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No feasible candidate action could be sampled around the current pose.
class ExplorationStuckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PlanningFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a Gram matrix stays indefinite after jitter escalation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace bkiexp
