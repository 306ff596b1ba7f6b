#pragma once

#include <stdexcept>
#include <string>

namespace sl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, undecodable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Raster dimensions disagree with their paired image.
class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

/// Scribbles are missing a foreground or background class.
class AnnotationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input with no variance (e.g. every feature row identical).
class DegenerateDataError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace sl
