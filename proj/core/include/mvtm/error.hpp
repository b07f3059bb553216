#pragma once

#include <stdexcept>
#include <string>

namespace mvtm {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter value (bad bounds, out-of-range sizes).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; messages carry the offending line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Shape or dimension mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerically rank-deficient or singular input where full rank is required.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Divergence or breakdown inside an iterative computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvtm
