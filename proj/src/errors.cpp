#include "seldec/errors.hpp"

#include <sstream>

namespace seldec {

namespace {

std::string hermitian_message(double defect, std::size_t row, std::size_t col) {
  std::ostringstream os;
  os << "matrix is not Hermitian: |M - M^dagger| = " << defect << " at (" << row
     << ", " << col << ")";
  return os.str();
}

std::string unitary_message(double defect) {
  std::ostringstream os;
  os << "matrix is not unitary: max |U^dagger U - I| = " << defect;
  return os.str();
}

std::string branch_message(double max_phase, double margin) {
  std::ostringstream os;
  os << "eigenphase " << max_phase << " lies within " << margin
     << " rad of the branch cut at pi; reduce T_f";
  return os.str();
}

std::string infeasible_message(std::size_t index, double value) {
  std::ostringstream os;
  os << "branch infeasible: delta" << index << " = " << value
     << " is outside (0, 1)";
  return os.str();
}

}  // namespace

NotHermitianError::NotHermitianError(double defect, std::size_t row, std::size_t col)
    : InputError(hermitian_message(defect, row, col)),
      defect_(defect),
      row_(row),
      col_(col) {}

NotUnitaryError::NotUnitaryError(double defect)
    : InputError(unitary_message(defect)), defect_(defect) {}

InfeasibleBranchError::InfeasibleBranchError(std::size_t index, double value)
    : DomainError(infeasible_message(index, value)), index_(index), value_(value) {}

BranchCutError::BranchCutError(double max_phase, double margin)
    : NumericalError(branch_message(max_phase, margin)), max_phase_(max_phase) {}

}  // namespace seldec
