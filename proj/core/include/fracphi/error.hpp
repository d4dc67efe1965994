#pragma once

#include <stdexcept>
#include <string>

namespace fracphi {

/// Raised when an input violates an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure exhausts its budget without meeting
/// its accuracy target. Carries the best estimate reached.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double best_value, double best_error)
      : std::runtime_error(what), best_value_(best_value), best_error_(best_error) {}

  double best_value() const noexcept { return best_value_; }
  double best_error() const noexcept { return best_error_; }

 private:
  double best_value_;
  double best_error_;
};

}  // namespace fracphi
