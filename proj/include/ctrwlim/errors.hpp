#pragma once

#include <stdexcept>
#include <string>

namespace ctrwlim {

/// A parameter lies outside the domain of the law or operation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical evaluation did not reach the requested accuracy.
/// The best value obtained so far is kept for inspection.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double partial_value)
      : std::runtime_error(what), partial_value_(partial_value) {}

  double partial_value() const noexcept { return partial_value_; }

 private:
  double partial_value_;
};

/// An argument falls outside the range covered by a path or grid.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A renewal skeleton does not reach far enough in time; regenerate or extend it.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] void throw_parameter(const std::string& what);
inline void require(bool ok, const std::string& what) {
  if (!ok) throw_parameter(what);
}
}  // namespace detail

}  // namespace ctrwlim
