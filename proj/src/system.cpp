#include "seldec/system.hpp"

#include <set>

#include "seldec/errors.hpp"

namespace seldec {

namespace {

std::vector<std::string> default_labels(std::size_t dim) {
  static const char* const kNamed[] = {"g", "e", "f"};
  std::vector<std::string> labels;
  labels.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i)
    labels.emplace_back(i < 3 ? std::string(kNamed[i]) : "l" + std::to_string(i));
  return labels;
}

void require_compatible(const ComplexMatrix& h, const PulsePlan& plan) {
  if (h.rows() != plan.pulse.rows() || h.cols() != plan.pulse.cols()) {
    throw DimensionError("Hamiltonian is " + std::to_string(h.rows()) + "x" +
                         std::to_string(h.cols()) + " but the system has dimension " +
                         std::to_string(plan.pulse.rows()));
  }
  require_hermitian(h);
}

}  // namespace

LevelSystem::LevelSystem() : LevelSystem(3, {1, 2}) {}

LevelSystem::LevelSystem(std::size_t dim, std::vector<std::size_t> flip_set,
                         std::vector<std::string> labels)
    : labels_(labels.empty() ? default_labels(dim) : std::move(labels)),
      flip_set_(std::move(flip_set)),
      partition_(dim, flip_set_) {
  if (dim < 3) throw InputError("level system needs at least 3 levels");
  if (labels_.size() != dim) {
    throw InputError("expected " + std::to_string(dim) + " labels, got " +
                     std::to_string(labels_.size()));
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw InputError("basis labels must be unique");
  }
}

PulsePlan pulse_operator(const LevelSystem& system) {
  const auto dim = static_cast<Eigen::Index>(system.dim());
  ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    r(i, i) = system.partition().is_flipped(static_cast<std::size_t>(i)) ? -1.0 : 1.0;
  return PulsePlan{system, std::move(r)};
}

ComplexMatrix rotated_hamiltonian(const ComplexMatrix& h, const PulsePlan& plan) {
  require_compatible(h, plan);
  return plan.pulse * h * plan.pulse;
}

ComplexMatrix target_hamiltonian(const ComplexMatrix& h, const PulsePlan& plan) {
  return 0.5 * (h + rotated_hamiltonian(h, plan));
}

CouplingDecomposition coupling_decomposition(const ComplexMatrix& h, const PulsePlan& plan) {
  const ComplexMatrix rotated = rotated_hamiltonian(h, plan);
  return {0.5 * (h + rotated), 0.5 * (h - rotated)};
}

}  // namespace seldec
