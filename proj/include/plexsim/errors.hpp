#pragma once

#include <stdexcept>
#include <string>

namespace plexsim {

/// Base of every error thrown by the library. `exit_code()` is what the
/// command-line front end returns when the error escapes a run.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

/// Parameter outside its documented domain (negative rate, non-finite value...).
class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A closed form evaluated at a point where it is 0/0 or x/0.
class UndefinedLimit : public Error {
 public:
  using Error::Error;
};

class FitFailure : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class DispersionError : public Error {
 public:
  using Error::Error;
};

class WeakPumpViolation : public Error {
 public:
  using Error::Error;
};

class UndefinedStatistics : public Error {
 public:
  using Error::Error;
};

class DegenerateNullSpace : public Error {
 public:
  using Error::Error;
};

/// Configuration parse or validation problem.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

}  // namespace plexsim
