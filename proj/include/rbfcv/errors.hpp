#pragma once

#include <stdexcept>
#include <string>

namespace rbfcv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class SvdFailure : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

class InvalidCount : public Error {
 public:
  using Error::Error;
};

class InvalidFoldCount : public Error {
 public:
  using Error::Error;
};

/// A validation block (G^+)_{p,p} could not be inverted; the fold is degenerate.
class SingularSubmatrix : public Error {
 public:
  using Error::Error;
};

class ZeroDiagonal : public Error {
 public:
  using Error::Error;
};

class AllEpsilonFailed : public Error {
 public:
  using Error::Error;
};

/// Malformed input that does not fit any numerical category (shape mismatch,
/// inapplicable strategy, bad configuration value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rbfcv
