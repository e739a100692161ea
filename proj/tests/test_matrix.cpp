#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "seldec/errors.hpp"
#include "seldec/matrix.hpp"
#include "support/oracles.hpp"

using namespace seldec;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v(i++) = x;
  return v.asDiagonal();
}

const std::vector<std::size_t> kEf{1, 2};

}  // namespace

TEST_CASE("commutator of diagonal matrices vanishes") {
  const auto c = commutator(diag({1, -1, -1}), diag({2, 3, 5}));
  CHECK(c.norm() == 0.0);
}

TEST_CASE("commutator of a matrix with itself vanishes") {
  const auto a = random_hermitian(4, 3);
  CHECK(commutator(a, a).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("commutator 2x2 example") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  const auto c = commutator(a, diag({1, -1}));
  CHECK(c(0, 1) == Complex(-2.0));
  CHECK(c(1, 0) == Complex(2.0));
  CHECK(c(0, 0) == Complex(0.0));
  CHECK(c(1, 1) == Complex(0.0));
}

TEST_CASE("commutator rejects mismatched dimensions") {
  CHECK_THROWS_AS(commutator(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
                  DimensionError);
}

TEST_CASE("exp_hermitian_generator") {
  SUBCASE("s = 0 gives identity") {
    const auto u = exp_hermitian_generator(random_hermitian(3, 1), 0.0);
    CHECK((u - ComplexMatrix::Identity(3, 3)).norm() <= 1e-14);
  }
  SUBCASE("diagonal generator") {
    const double t = 0.7;
    const auto u = exp_hermitian_generator(diag({0.3, -1.1, 2.5}), t);
    const auto expected = diag({std::exp(Complex(0, -0.3 * t)), std::exp(Complex(0, 1.1 * t)),
                                std::exp(Complex(0, -2.5 * t))});
    CHECK((u - expected).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("2pi rotation of sigma_x gives -I") {
    ComplexMatrix sx = ComplexMatrix::Zero(2, 2);
    sx(0, 1) = sx(1, 0) = 1.0;
    const auto u = exp_hermitian_generator(sx, std::numbers::pi);
    CHECK((u + ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("matches an independent Taylor series") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto h = testing::random_hermitian_oracle(4, seed);
      const auto u = exp_hermitian_generator(h, 0.9);
      CHECK((u - testing::taylor_exp(h, 0.9)).norm() <= 1e-12);
      CHECK(is_unitary(u, 1e-12));
    }
  }
  SUBCASE("non-Hermitian input reports the defect") {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 2) = 0.5;
    try {
      exp_hermitian_generator(m, 1.0);
      FAIL("expected NotHermitianError");
    } catch (const NotHermitianError& e) {
      CHECK(e.defect() == doctest::Approx(0.5));
      CHECK(((e.row() == 0 && e.col() == 2) || (e.row() == 2 && e.col() == 0)));
    }
  }
}

TEST_CASE("principal_log_unitary") {
  SUBCASE("identity") {
    CHECK(principal_log_unitary(ComplexMatrix::Identity(3, 3)).norm() <= 1e-15);
  }
  SUBCASE("diagonal example") {
    const auto u = diag({std::exp(Complex(0, -0.3)), std::exp(Complex(0, 0.2)), 1.0});
    const auto g = principal_log_unitary(u);
    CHECK((g - diag({0.3, -0.2, 0.0})).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("small-time round trip") {
    const auto h = random_hermitian(3, 11);
    const auto g = principal_log_unitary(exp_hermitian_generator(h, 0.01));
    CHECK((g - 0.01 * h).norm() <= 1e-10);
    CHECK(is_hermitian(g, 1e-10));
  }
  SUBCASE("degenerate spectrum keeps a Hermitian logarithm") {
    const auto u = exp_hermitian_generator(diag({0.2, 0.2, -0.4}), 1.0);
    const auto g = principal_log_unitary(u);
    CHECK((g - diag({0.2, 0.2, -0.4})).norm() <= 1e-13);
  }
  SUBCASE("non-unitary input") {
    CHECK_THROWS_AS(principal_log_unitary(2.0 * ComplexMatrix::Identity(3, 3)), NotUnitaryError);
  }
  SUBCASE("eigenphase near the branch cut") {
    const auto u = diag({std::exp(Complex(0, std::numbers::pi - 0.05)), 1.0, 1.0});
    CHECK_THROWS_AS(principal_log_unitary(u), BranchCutError);
    CHECK_NOTHROW(principal_log_unitary(diag({std::exp(Complex(0, std::numbers::pi - 0.2)), 1.0, 1.0})));
  }
}

TEST_CASE("block_split") {
  const Bipartition partition(3, kEf);
  SUBCASE("diagonal input stays in the block part") {
    const auto m = diag({1.0, 2.0, 3.0});
    const auto parts = block_split(m, partition);
    CHECK(parts.diag_part == m);
    CHECK(parts.offdiag_part.norm() == 0.0);
  }
  SUBCASE("g-e coupling is cross-block") {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = Complex(0.4, 0.3);
    m(1, 0) = std::conj(m(0, 1));
    const auto parts = block_split(m, partition);
    CHECK(parts.diag_part.norm() == 0.0);
    CHECK(parts.offdiag_part == m);
  }
  SUBCASE("wrong dimension") {
    CHECK_THROWS_AS(block_split(ComplexMatrix::Identity(4, 4), partition), DimensionError);
  }
}

TEST_CASE("frobenius_norm examples") {
  CHECK(frobenius_norm(ComplexMatrix::Identity(3, 3)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(frobenius_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = Complex(3, 4);
  CHECK(frobenius_norm(m) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("Bipartition validation") {
  const std::vector<std::size_t> empty;
  const std::vector<std::size_t> all{0, 1, 2};
  const std::vector<std::size_t> dup{1, 1};
  const std::vector<std::size_t> out_of_range{3};
  CHECK_THROWS_AS(Bipartition(3, empty), InputError);
  CHECK_THROWS_AS(Bipartition(3, all), InputError);
  CHECK_THROWS_AS(Bipartition(3, dup), InputError);
  CHECK_THROWS_AS(Bipartition(3, out_of_range), InputError);
  const Bipartition ok(4, kEf);
  CHECK(ok.keep_indices() == std::vector<std::size_t>{0, 3});
  CHECK(ok.flip_indices() == kEf);
}

TEST_CASE("random_hermitian is seeded, dense and unit norm") {
  const auto a = random_hermitian(3, 42, 7);
  const auto b = random_hermitian(3, 42, 7);
  CHECK(a == b);
  CHECK(a != random_hermitian(3, 42, 8));
  CHECK(is_hermitian(a, 0.0));
  CHECK(spectral_norm(a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.cwiseAbs().minCoeff() > 0.0);
}

// ------------------------------------------------------------------ properties

TEST_CASE("property: exp/log round trip") {
  for (std::uint64_t t = 0; t < 60; ++t) {
    const auto h = random_hermitian(3 + t % 3, 100, t);
    const double s = 0.05 + 0.95 * static_cast<double>(t) / 60.0;
    const auto g = principal_log_unitary(exp_hermitian_generator(h, s));
    CHECK((g - s * h).norm() <= 1e-10);
  }
}

TEST_CASE("property: products of exponentials stay unitary") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    ComplexMatrix u = ComplexMatrix::Identity(3, 3);
    for (int k = 0; k < 6; ++k) u = exp_hermitian_generator(random_hermitian(3, t, k), 0.3 * k) * u;
    CHECK(is_unitary(u, 1e-11));
  }
}

TEST_CASE("property: block_split is idempotent and Pythagorean") {
  const Bipartition partition(3, kEf);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto m = random_hermitian(3, 5, t);
    const auto parts = block_split(m, partition);
    CHECK(parts.diag_part + parts.offdiag_part == m);
    CHECK(is_hermitian(parts.diag_part, 0.0));
    CHECK(is_hermitian(parts.offdiag_part, 0.0));
    const double lhs = parts.diag_part.squaredNorm() + parts.offdiag_part.squaredNorm();
    CHECK(std::abs(lhs - m.squaredNorm()) <= 1e-14 * m.squaredNorm());
    const auto again = block_split(parts.diag_part, partition);
    CHECK(again.diag_part == parts.diag_part);
    CHECK(again.offdiag_part.norm() == 0.0);
  }
}

TEST_CASE("property: commutator antisymmetry") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto a = random_hermitian(4, 9, 2 * t);
    const auto b = random_hermitian(4, 9, 2 * t + 1);
    CHECK((commutator(a, b) + commutator(b, a)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}
