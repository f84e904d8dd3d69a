#pragma once

#include <stdexcept>
#include <string>

namespace ctl {

/// Arguments from different systems, or outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A user supplied parameter violates its documented constraint.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration or node budget exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite window ran out of symbols and no generator word can refill it.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proof-path constructor was called outside its case split.
class CaseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Something the construction guarantees did not hold.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ctl
