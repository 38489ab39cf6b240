#pragma once

#include <stdexcept>
#include <string>

namespace goh_atlas {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A frame or field fails a structural precondition (normal form, metabelian shape).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Picard iteration of an exact flow did not stabilize.
class NotNilpotentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values during numerical integration.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The variational flow became numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace goh_atlas
