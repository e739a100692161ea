#include "seldec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "seldec/errors.hpp"

namespace seldec {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  require_square(a, what);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch " +
                         std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  }
}

}  // namespace

Bipartition::Bipartition(std::size_t dim, std::span<const std::size_t> flip)
    : flip_mask_(dim, false) {
  if (flip.empty()) throw InputError("flip set must be nonempty");
  for (std::size_t index : flip) {
    if (index >= dim) {
      throw InputError("flip index " + std::to_string(index) + " out of range for dimension " +
                       std::to_string(dim));
    }
    if (flip_mask_[index]) {
      throw InputError("flip index " + std::to_string(index) + " listed twice");
    }
    flip_mask_[index] = true;
  }
  if (flip.size() == dim) throw InputError("flip set must not cover every index");
}

std::vector<std::size_t> Bipartition::flip_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flip_mask_.size(); ++i)
    if (flip_mask_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> Bipartition::keep_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flip_mask_.size(); ++i)
    if (!flip_mask_[i]) out.push_back(i);
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  require_square(m, "hermiticity_defect");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& m) {
  require_square(m, "unitarity_defect");
  const auto identity = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - identity).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

bool is_unitary(const ComplexMatrix& m, double tol) { return unitarity_defect(m) <= tol; }

void require_hermitian(const ComplexMatrix& m, double tol) {
  require_square(m, "require_hermitian");
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff(&row, &col);
  if (!(defect <= tol)) {
    throw NotHermitianError(defect, static_cast<std::size_t>(row), static_cast<std::size_t>(col));
  }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix exp_hermitian_generator(const ComplexMatrix& h, double s, double tol) {
  require_hermitian(h, tol);
  const ComplexMatrix hermitian = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian);
  const Eigen::VectorXcd phases =
      (eig.eigenvalues().cast<Complex>() * Complex(0.0, -s)).array().exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

ComplexMatrix principal_log_unitary(const ComplexMatrix& u, double branch_margin, double tol) {
  require_square(u, "principal_log_unitary");
  const double defect = unitarity_defect(u);
  if (!(defect <= tol)) throw NotUnitaryError(defect);

  // A unitary is normal, so its Schur form is diagonal up to rounding and the
  // Schur vectors are an orthonormal eigenbasis even for clustered spectra.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  const ComplexMatrix& q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();

  const Eigen::Index dim = u.rows();
  Eigen::VectorXcd generator_eigs(dim);
  double max_phase = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    // e^{-i g} = lambda  =>  g = -arg(lambda)
    const double phase = std::arg(t(i, i));
    max_phase = std::max(max_phase, std::abs(phase));
    generator_eigs(i) = -phase;
  }
  if (max_phase > std::numbers::pi - branch_margin) throw BranchCutError(max_phase, branch_margin);

  const ComplexMatrix g = q * generator_eigs.asDiagonal() * q.adjoint();
  return 0.5 * (g + g.adjoint());
}

BlockParts block_split(const ComplexMatrix& m, const Bipartition& partition) {
  require_square(m, "block_split");
  if (static_cast<std::size_t>(m.rows()) != partition.dim()) {
    throw DimensionError("block_split: partition covers " + std::to_string(partition.dim()) +
                         " indices but matrix has dimension " + std::to_string(m.rows()));
  }
  BlockParts parts{ComplexMatrix::Zero(m.rows(), m.cols()), ComplexMatrix::Zero(m.rows(), m.cols())};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      auto& target = partition.same_block(static_cast<std::size_t>(i), static_cast<std::size_t>(j))
                         ? parts.diag_part
                         : parts.offdiag_part;
      target(i, j) = m(i, j);
    }
  }
  return parts;
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double relative_deviation(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "relative_deviation");
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed, std::uint64_t stream) {
  if (dim == 0) throw DimensionError("random_hermitian: dimension must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return h / spectral_norm(h);
}

}  // namespace seldec
