#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace seldec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kBranchMargin = 0.1;

/// Split of the index set {0, ..., dim-1} into a keep part and a flip part.
class Bipartition {
 public:
  /// Throws InputError unless `flip` is a nonempty proper subset of the
  /// indices, with no duplicates.
  Bipartition(std::size_t dim, std::span<const std::size_t> flip);

  std::size_t dim() const noexcept { return flip_mask_.size(); }
  bool is_flipped(std::size_t index) const { return flip_mask_.at(index); }
  bool same_block(std::size_t i, std::size_t j) const {
    return flip_mask_.at(i) == flip_mask_.at(j);
  }
  std::vector<std::size_t> flip_indices() const;
  std::vector<std::size_t> keep_indices() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  std::vector<bool> flip_mask_;
};

struct BlockParts {
  ComplexMatrix diag_part;     // entries within the keep block or within the flip block
  ComplexMatrix offdiag_part;  // entries coupling the two blocks
};

/// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const ComplexMatrix& m);
/// Largest entrywise |M^dagger M - I|.
double unitarity_defect(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTolerance);

/// Throws NotHermitianError carrying the largest defect and its location.
void require_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// e^{-i s H} by Hermitian eigendecomposition.
ComplexMatrix exp_hermitian_generator(const ComplexMatrix& h, double s,
                                      double tol = kDefaultTolerance);

/// Hermitian G with eigenvalues in (-pi, pi] and e^{-iG} = U.
///
/// Eigenphases whose magnitude exceeds pi - branch_margin are rejected with
/// BranchCutError: near the cut the branch choice is decided by rounding.
ComplexMatrix principal_log_unitary(const ComplexMatrix& u,
                                    double branch_margin = kBranchMargin,
                                    double tol = kDefaultTolerance);

BlockParts block_split(const ComplexMatrix& m, const Bipartition& partition);

double frobenius_norm(const ComplexMatrix& m);
/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// ||a - b||_F / max(||a||_F, ||b||_F); zero when both vanish.
double relative_deviation(const ComplexMatrix& a, const ComplexMatrix& b);

/// Dense random Hermitian matrix with unit spectral norm. Entries are
/// standard complex Gaussians symmetrized as (M + M^dagger)/2. The stream is
/// derived from (seed, stream) only.
ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed,
                               std::uint64_t stream = 0);

}  // namespace seldec
