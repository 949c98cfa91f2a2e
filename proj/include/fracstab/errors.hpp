// Exception taxonomy shared by all fracstab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace fracstab {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations: bad arguments, out-of-range parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not meet its error contract. Carries the bound
// that was actually achieved.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_bound_(achieved) {}
  double achieved_bound() const { return achieved_bound_; }

 private:
  double achieved_bound_;
};

// Config-file problems; message carries the line number where known.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A simulated path left the finite range. Carries the first bad step.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step, double time)
      : Error(what), step_(step), time_(time) {}
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

// A certificate quantity has no feasible value for the supplied constants.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracstab
