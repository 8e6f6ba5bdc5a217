#pragma once

#include <stdexcept>
#include <string>

namespace gsparse {

struct StreamViolation : std::runtime_error {
  long line = -1;
  explicit StreamViolation(const std::string& what, long line_no = -1)
      : std::runtime_error(what), line(line_no) {}
};

struct NonZeroSum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EdgeAbsent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegreeTooLow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gsparse
