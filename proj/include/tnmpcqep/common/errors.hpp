#pragma once

#include <stdexcept>
#include <string>

namespace tnmpcqep {

// Caller violated an API contract (bad shape, mismatched ring width, bad flag).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A real value does not fit the fixed-point range of the ring.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Mathematical domain violated (non-positive divisor, zero weights, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Replicated shares disagree on an overlapping component.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A protocol run could not complete (transport failure, missing message).
class ProtocolAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file or stream contents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-finite value appeared inside a numerical pipeline stage.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tnmpcqep
