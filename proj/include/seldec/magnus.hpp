#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seldec/matrix.hpp"
#include "seldec/sequence.hpp"
#include "seldec/system.hpp"

namespace seldec {

/// heff_3 = kThirdOrderNormalization * T_f^2 * (C1 [H,[H_R,H]] + C2 [H_R,[H_R,H]]).
///
/// Fixed by fitting the closed-form coefficients against the ordered-sum
/// Magnus terms; pinned by a regression test.
inline constexpr double kThirdOrderNormalization = -1.0 / 6.0;

inline constexpr const char* kSecondOrderConvention = "heff_2 = (i T_f / 2) * S * [H, H_R]";
inline constexpr const char* kThirdOrderConvention =
    "heff_3 = alpha * T_f^2 * (C1 [H,[H_R,H]] + C2 [H_R,[H_R,H]]), alpha = -1/6";

struct Segment {
  ComplexMatrix hamiltonian;
  double fraction;
};

/// Piecewise-constant generator: H on even intervals, H_R on odd ones.
class PiecewiseGenerator {
 public:
  PiecewiseGenerator(const ComplexMatrix& h, const PulsePlan& plan, const PulseSequence& seq);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const ComplexMatrix& free_hamiltonian() const noexcept { return segments_.front().hamiltonian; }
  const ComplexMatrix& rotated() const noexcept { return rotated_; }

 private:
  std::vector<Segment> segments_;
  ComplexMatrix rotated_;
};

/// Exact Magnus term of the given order (1, 2 or 3) for A(t) = -i H(t),
/// evaluated as ordered sums over the intervals.
ComplexMatrix omega_sum(int order, const PiecewiseGenerator& gen, double total_time);

/// (i / T_f) * Omega_k.
ComplexMatrix effective_term(int order, const PiecewiseGenerator& gen, double total_time);

/// S = sum_{j=1}^{n/2} [delta_{2j-1} sum_{k<j} delta_{2k} - delta_{2j} sum_{k<j} delta_{2k+1}].
double second_order_coefficient(const PulseSequence& seq);
/// Same sum over raw fractions (odd count); no sequence invariants enforced.
double second_order_coefficient(std::span<const double> deltas);

struct ThirdOrderCoefficients {
  double c1;  // multiplies [H, [H_R, H]]
  double c2;  // multiplies [H_R, [H_R, H]]
};

/// Closed-form third-order scalars for n = 2 or 4 (for n = 2 the missing
/// delta_3 and delta_4 are zero). Throws DomainError for larger n.
ThirdOrderCoefficients third_order_coefficients(const PulseSequence& seq);
ThirdOrderCoefficients third_order_coefficients(std::span<const double> deltas);

/// Closed-form heff_2 and heff_3.
ComplexMatrix closed_form_second_order(const ComplexMatrix& h, const ComplexMatrix& rotated,
                                       double s, double total_time);
ComplexMatrix third_order_basis(const ComplexMatrix& h, const ComplexMatrix& rotated,
                                const ThirdOrderCoefficients& c, double total_time);

struct MagnusReport {
  ComplexMatrix heff_1;
  ComplexMatrix heff_2;
  ComplexMatrix heff_3;
  double s = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool has_third_order_closed_form = false;
  /// Relative Frobenius deviation of the closed form from the ordered sums,
  /// per order (index 0 is first order). Third order uses the frozen alpha.
  std::vector<double> oracle_deviation;
  std::string second_order_convention = kSecondOrderConvention;
  std::string third_order_convention = kThirdOrderConvention;
};

MagnusReport closed_form_report(const PulseSequence& seq, const ComplexMatrix& h,
                                const PulsePlan& plan, double total_time);

struct OracleComparison {
  int trials = 0;
  std::uint64_t seed = 0;
  double max_first_order_deviation = 0.0;
  double max_second_order_deviation = 0.0;
  /// Least-squares alpha over all trials, and the worst relative residual of
  /// heff_3 against alpha * T_f^2 * (C1 ... + C2 ...). Absent for n > 4.
  bool has_third_order = false;
  double fitted_alpha = 0.0;
  double max_third_order_deviation = 0.0;
  /// Largest ||cross-block(heff_3)||_F / (T_f^2 ||H||_F^3).
  double max_third_order_cross_block = 0.0;
};

/// Compares closed forms with the ordered sums over `trials` random
/// unit-norm Hamiltonians of the plan's dimension. Trial t uses the random
/// stream (seed, t), so results do not depend on evaluation order.
OracleComparison closed_form_vs_oracle(const PulseSequence& seq, const PulsePlan& plan,
                                       double total_time, int trials, std::uint64_t seed);

}  // namespace seldec
