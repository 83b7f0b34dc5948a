#pragma once

#include <stdexcept>
#include <string>

namespace bdes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Value outside its mathematical domain (probability not in [0,1], eps <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class HorizonExhausted : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two probe means too close to solve for lambda.
class DegenerateProbe : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdes
