#pragma once

#include <stdexcept>
#include <string>

namespace ffsc {

/// Exact integer capacity exceeded (the requested chain is too long for exact mode).
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Enumeration refused because 2^N exceeds the configured cap.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (t <= 0, beta = 0 for f, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A continuity equation has no real solution.
class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ffsc
