#pragma once

#include <stdexcept>
#include <string>

namespace glspace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain of the formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inputs are individually valid but inconsistent with each other.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Something that should be impossible happened.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace glspace
