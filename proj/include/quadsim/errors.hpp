#pragma once

#include <stdexcept>
#include <string>

namespace quadsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a mathematical operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// cos(phi)*cos(theta) fell to or below the controller tilt threshold.
class TiltError : public Error {
 public:
  using Error::Error;
};

/// The spectral estimator could not produce a slope for the requested band.
class BandError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or parameter set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadsim
