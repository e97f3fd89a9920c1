#pragma once

#include <stdexcept>
#include <string>

namespace equichain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad indices, non-increasing maps, bad chain files).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked for an invariant that is undefined on its argument,
/// e.g. minimal primes of the zero or unit ideal.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The materialized horizon is too short for the requested verdict.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// The Taylor oracle refuses ideals with too many generators.
class OracleCapError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. an Inc-containment that must hold).
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace equichain
