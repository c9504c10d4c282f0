#pragma once

#include <stdexcept>
#include <string>

namespace saweit {

// Argument outside the physical domain (negative rate, zero linewidth, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The scattering denominator vanishes: no rates and no detuning.
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transmission is exactly zero so its phase is undefined.
class UndefinedPhaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Liouvillian kernel is more than one-dimensional.
class NoUniqueSteadyState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few distinct abscissae to identify a regression.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace saweit
