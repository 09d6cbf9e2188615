#pragma once

#include <stdexcept>
#include <string>

namespace gfdm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad shapes, sizes, or parameters. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical failures (singular window, matrix, or channel). Exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularWindow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularChannel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The direct architecture needs more parallel multiplier chains than it has.
class ChainLimitExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A frequency-domain pulse spans more subcarrier bands than available chains.
class OverlapTooLarge : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Requested transform is longer than the configured maximum FFT length.
class FftSizeExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Latency evaluation needs a processing-cycle figure the cost table lacks.
class MissingCostEntry : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace gfdm
