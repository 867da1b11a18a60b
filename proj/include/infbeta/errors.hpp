#ifndef INFBETA_ERRORS_HPP
#define INFBETA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infbeta {

// Argument outside the mathematical domain of a function or parameter type.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad input data (unparseable cell, value outside [0,1], empty sample).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t index = npos)
      : std::runtime_error(what), index_(index) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// A value lies in [0,1] but not in the support of the requested family.
class SupportError : public DataError {
 public:
  using DataError::DataError;
};

// Estimation failures: the data do not admit an estimate in the open
// parameter space, or the optimizer did not converge.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// alpha-hat (or another proportion) landed on 0 or 1.
class BoundaryEstimateError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Too few interior observations for the requested estimator.
class InsufficientDataError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Conditional-moment system has no solution with phi > 0.
class MomentError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

// Singular or otherwise unusable matrix.
class NumericalError : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

}  // namespace infbeta

#endif  // INFBETA_ERRORS_HPP
