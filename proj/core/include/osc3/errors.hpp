#pragma once

#include <stdexcept>
#include <string>

namespace osc3 {

/// Argument outside the mathematical domain of an operation (negative time, non-positive initial frequency).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A parameter combination the library deliberately refuses, e.g. a quench to zero frequency.
class UnsupportedError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A reduced kernel that does not describe a valid (normalizable, positive) density matrix.
class InvalidStateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The Ermakov integrator could not advance (scale factor collapsed, step size underflow).
class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Ill-conditioned linear algebra or a discretization that cannot resolve the kernel.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace osc3
