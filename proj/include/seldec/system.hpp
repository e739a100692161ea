#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "seldec/matrix.hpp"

namespace seldec {

/// Multilevel system in its logic basis together with the set of levels the
/// 2pi pulse acts on.
class LevelSystem {
 public:
  /// Three levels g, e, f with the pulse acting on span{e, f}.
  LevelSystem();
  /// Empty `labels` selects "g", "e", "f", then "l3", "l4", ...
  LevelSystem(std::size_t dim, std::vector<std::size_t> flip_set,
              std::vector<std::string> labels = {});

  std::size_t dim() const noexcept { return partition_.dim(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& flip_set() const noexcept { return flip_set_; }
  const Bipartition& partition() const noexcept { return partition_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> flip_set_;
  Bipartition partition_;
};

/// The ideal instantaneous pulse R = P_keep - P_flip for a system.
///
/// Any SU(2) generator with eigenvalues ±1 on the flipped levels gives the
/// same exponential e^{-i pi sigma}, so only the resulting phase flip is kept.
struct PulsePlan {
  LevelSystem system;
  ComplexMatrix pulse;
};

PulsePlan pulse_operator(const LevelSystem& system);

/// R H R: cross-block entries change sign, block entries are untouched.
ComplexMatrix rotated_hamiltonian(const ComplexMatrix& h, const PulsePlan& plan);

/// (H + H_R)/2, the block-diagonal part of H.
ComplexMatrix target_hamiltonian(const ComplexMatrix& h, const PulsePlan& plan);

struct CouplingDecomposition {
  ComplexMatrix target;    // H_T
  ComplexMatrix unwanted;  // H_V = (H - H_R)/2
};

CouplingDecomposition coupling_decomposition(const ComplexMatrix& h, const PulsePlan& plan);

}  // namespace seldec
