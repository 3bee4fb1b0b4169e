#pragma once

#include <stdexcept>
#include <string>

namespace robustface {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

// Zero vectors, empty inputs and similar inputs a routine cannot act on.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// An operation that is well defined only in a mode the caller did not select
// (e.g. evaluating the potential loss with adaptive weights).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace robustface
