#pragma once

#include <stdexcept>
#include <string>

namespace thetadft {

/// Argument outside the mathematical domain (Im tau <= 0, N < 1, xi <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The lattice sum needs more terms than the policy allows.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivative or series order above the supported cap.
class UnsupportedOrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An eigenstate whose norm is lost in cancellation; it cannot be normalized.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thetadft
