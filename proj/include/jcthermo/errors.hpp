#pragma once

#include <stdexcept>
#include <string>

namespace jcthermo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// States with different Fock cutoffs were combined.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// The Fock cutoff drops more Poisson mass than the tolerance allows.
class InsufficientTruncation : public Error {
public:
  InsufficientTruncation(const std::string& what, std::size_t required_n_max)
      : Error(what), required_n_max_(required_n_max) {}

  std::size_t required_n_max() const noexcept { return required_n_max_; }

private:
  std::size_t required_n_max_;
};

/// The ODE integrator could not reach the requested time.
class IntegrationFailure : public Error {
public:
  IntegrationFailure(const std::string& what, double achieved_time)
      : Error(what), achieved_time_(achieved_time) {}

  double achieved_time() const noexcept { return achieved_time_; }

private:
  double achieved_time_;
};

/// An iterative solver (Lambert W, root bracketing) did not converge.
class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

} // namespace jcthermo
