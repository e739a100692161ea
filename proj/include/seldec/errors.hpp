#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seldec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong shapes, invalid partitions, out-of-domain parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class NotHermitianError : public InputError {
 public:
  NotHermitianError(double defect, std::size_t row, std::size_t col);
  double defect() const noexcept { return defect_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  double defect_;
  std::size_t row_;
  std::size_t col_;
};

class NotUnitaryError : public InputError {
 public:
  explicit NotUnitaryError(double defect);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Parameter outside the admissible domain of an operation.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// A family branch produced a fraction outside (0, 1).
class InfeasibleBranchError : public DomainError {
 public:
  InfeasibleBranchError(std::size_t index, double value);
  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  double value_;
};

/// Numerical guards: results would be unreliable, not merely invalid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An eigenphase of a unitary sits too close to the branch cut at ±π.
class BranchCutError : public NumericalError {
 public:
  BranchCutError(double max_phase, double margin);
  double max_phase() const noexcept { return max_phase_; }

 private:
  double max_phase_;
};

class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace seldec
