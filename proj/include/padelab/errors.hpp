#pragma once

#include <stdexcept>
#include <string>

namespace padelab {

// Base of every numerical failure raised by the library.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootFindingError : public NumericalError {
 public:
  RootFindingError(const std::string& what, int iterations, double residual)
      : NumericalError(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class PoleProximityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedBuild : public NumericalError {
 public:
  IllConditionedBuild(const std::string& what, double condition, double residual)
      : NumericalError(what), condition_(condition), residual_(residual) {}
  double condition() const { return condition_; }
  double residual() const { return residual_; }

 private:
  double condition_;
  double residual_;
};

// Invalid experiment configuration or out-of-range request.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace padelab
