#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace seldec {

inline constexpr double kFractionTolerance = 1e-12;

/// Interval fractions delta_0..delta_n of a sequence of n pulses.
///
/// n is even and positive, every fraction lies in (0, 1), and the fractions
/// sum to one. Sums off by at most 1e-12 are renormalized; anything larger is
/// rejected.
class PulseSequence {
 public:
  explicit PulseSequence(std::vector<double> deltas);

  /// Free evolution over the whole window, no pulses. Only meaningful as a
  /// propagation baseline; it is not a decoupling sequence.
  static PulseSequence free_evolution();

  std::size_t pulse_count() const noexcept { return deltas_.size() - 1; }
  const std::vector<double>& deltas() const noexcept { return deltas_; }
  double operator[](std::size_t i) const { return deltas_.at(i); }

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  struct Unchecked {};
  PulseSequence(Unchecked, std::vector<double> deltas) : deltas_(std::move(deltas)) {}

  std::vector<double> deltas_;
};

struct ValidationReport {
  double sum_residual = 0.0;   // |sum delta - 1|
  double even_residual = 0.0;  // |sum_even delta - 1/2|
  double odd_residual = 0.0;   // |sum_odd delta - 1/2|
  bool parity_checked = false;
  bool passed = false;
};

/// Checks raw fractions against the sum constraint and, if requested, the
/// first-order parity condition sum_even = sum_odd = 1/2.
ValidationReport validate(std::span<const double> deltas, bool require_parity,
                          double tol = kFractionTolerance);
ValidationReport validate(const PulseSequence& seq, bool require_parity,
                          double tol = kFractionTolerance);

/// delta_i = sin^2((i+1) pi / (2n+2)) - sin^2(i pi / (2n+2)).
PulseSequence uhrig(int n);

/// The unique second-order solution for two pulses: (1/4, 1/2, 1/4).
PulseSequence exact_n2();

enum class Branch {
  upper,  // delta_0 = 1/2 + r/(8 delta_1) - delta_1/2
  lower,  // delta_0 = 1/2 - r/(8 delta_1) - delta_1/2
};

std::string_view to_string(Branch branch);
/// Accepts "upper" / "lower"; throws InputError otherwise.
Branch parse_branch(std::string_view text);

struct FeasibilityInterval {
  double lower;
  double upper;
};

/// Open interval (1/2 - 1/(2 sqrt 2), 1/(2 sqrt 2)) of admissible delta_1.
FeasibilityInterval family_n4_interval();

/// r(delta_1) = sqrt(16 d^4 - 16 d^3 + 2 d).
double family_n4_root(double delta1);

/// Four-pulse sequences with vanishing first- and second-order terms and a
/// vanishing cross-block third-order term, parameterized by delta_1.
///
/// delta_4 comes from the sum constraint. Throws DomainError when delta1 is
/// outside the open feasibility interval and InfeasibleBranchError when the
/// chosen branch yields a fraction outside (0, 1).
PulseSequence family_n4(double delta1, Branch branch);

struct BranchSequence {
  Branch branch;
  PulseSequence sequence;
};

/// Every feasible branch at delta1, upper first. Empty if none is feasible.
std::vector<BranchSequence> family_n4_all(double delta1);

/// Closed-form candidates for delta_4 printed alongside the family, evaluated
/// for comparison with the sum-constraint value.
struct Delta4Diagnostics {
  double from_sum;        // 1 - (delta_0 + ... + delta_3)
  double printed_upper;   // (r - (1 - 4 d^2)) / (4 - 8 d)
  double printed_lower;   // (r + (1 - 4 d^2)) / (4 - 8 d)
  double matching;        // ((1 - 4 d^2) ± r) / (4 - 8 d), sign of the branch
};

Delta4Diagnostics family_n4_delta4_diagnostics(double delta1, Branch branch);

/// Pulse instants t_1..t_n with t_i = T_f * sum_{j<i} delta_j.
std::vector<double> pulse_times(const PulseSequence& seq, double total_time);

}  // namespace seldec
