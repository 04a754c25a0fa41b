#pragma once

#include <stdexcept>
#include <string>

namespace sixvertex {

/// Invalid input outside a function's domain (N < 3, negative spin, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (N, n) does not define a primitive root of unity.
class PrimitivityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A construction would exceed the configured memory guard.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operators handed to joint_eigenbasis do not commute.
class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial coefficients could not be recovered from samples.
class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sample point hits a zero of Q^+ or Q^- persistently.
class SingularSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Intertwiner evaluated at a pole of its entries.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Missing or superfluous parameter (e.g. lambda for N = 6).
class ParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Moebius inversion for the Bethe parameter hit its pole.
class BranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sixvertex
