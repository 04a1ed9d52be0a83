#ifndef SUBPOIS_ERROR_HPP
#define SUBPOIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace subpois {

// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside a function's domain or documented working range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Divided differences require pairwise distinct evaluation points.
class CoincidentPointsError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An iteration failed to converge, a certificate failed, or a computed
// quantity left the band in which the method is trustworthy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Eigenvalues outside [-1e-6, 1 + 1e-6]: the discretization is unconverged.
class SpectrumRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The discarded spectral mass is too large for the requested moment.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// b_constant could not certify that the maximum is global.
class CertificateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Malformed user configuration (CLI flags, q-spec files, kernel ids).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace subpois

#endif  // SUBPOIS_ERROR_HPP
