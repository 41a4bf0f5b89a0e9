#pragma once

#include <stdexcept>
#include <string>

namespace visreg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (rho <= 0, e <= 0, alpha > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// State violates s_e > 0 or the strict convexity inequalities of -s.
class NonAdmissibleState : public Error {
 public:
  using Error::Error;
};

/// d = 0 where the analysis divides by d.
class DegenerateCoefficient : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class BadEos : public Error {
 public:
  using Error::Error;
};

/// Time integration could not continue (dt underflow, admissibility lost).
class StepFailure : public Error {
 public:
  using Error::Error;
};

class FamilyNotGeneralized : public Error {
 public:
  using Error::Error;
};

class NoCounterexample : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace visreg
