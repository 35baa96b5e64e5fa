#pragma once

#include <stdexcept>
#include <string>

namespace dexnet {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgumentError : Error {
  using Error::Error;
};

struct InvalidSegmentationError : Error {
  using Error::Error;
};

struct OutOfRangeError : Error {
  using Error::Error;
};

struct UndefinedMetricError : Error {
  using Error::Error;
};

struct NotConnectedError : Error {
  using Error::Error;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

struct DegenerateFitError : Error {
  using Error::Error;
};

struct EmptySeriesError : Error {
  using Error::Error;
};

struct InvalidAssignmentError : Error {
  using Error::Error;
};

struct DecodeError : Error {
  using Error::Error;
};

struct TransportError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct MismatchError : Error {
  using Error::Error;
};

}  // namespace dexnet
