#pragma once

#include <stdexcept>
#include <string>

namespace qisc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range or malformed protocol / configuration parameters.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix is not symmetric, not positive definite, or violates
/// the uncertainty relation.
class NonPhysicalCovariance : public Error {
 public:
  using Error::Error;
};

/// A closed form was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalInstability : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation discards more probability than allowed.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace qisc
