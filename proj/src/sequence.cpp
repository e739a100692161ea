#include "seldec/sequence.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "seldec/errors.hpp"

namespace seldec {

namespace {

double sum_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

PulseSequence::PulseSequence(std::vector<double> deltas) : deltas_(std::move(deltas)) {
  if (deltas_.size() < 3 || deltas_.size() % 2 == 0) {
    throw DomainError("a sequence needs an even, positive number of pulses (got " +
                      std::to_string(deltas_.empty() ? 0 : deltas_.size() - 1) + ")");
  }
  for (std::size_t i = 0; i < deltas_.size(); ++i) {
    if (!(deltas_[i] > 0.0 && deltas_[i] < 1.0)) {
      std::ostringstream os;
      os << "delta" << i << " = " << deltas_[i] << " is outside (0, 1)";
      throw DomainError(os.str());
    }
  }
  const double total = sum_of(deltas_);
  if (!(std::abs(total - 1.0) <= kFractionTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "fractions sum to " << total << ", not 1";
    throw DomainError(os.str());
  }
  if (total != 1.0)
    for (double& d : deltas_) d /= total;
}

PulseSequence PulseSequence::free_evolution() { return PulseSequence(Unchecked{}, {1.0}); }

ValidationReport validate(std::span<const double> deltas, bool require_parity, double tol) {
  ValidationReport report;
  double even = 0.0;
  double odd = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) (i % 2 == 0 ? even : odd) += deltas[i];
  report.sum_residual = std::abs(sum_of(deltas) - 1.0);
  report.even_residual = std::abs(even - 0.5);
  report.odd_residual = std::abs(odd - 0.5);
  report.parity_checked = require_parity;
  report.passed = report.sum_residual <= tol &&
                  (!require_parity || (report.even_residual <= tol && report.odd_residual <= tol));
  return report;
}

ValidationReport validate(const PulseSequence& seq, bool require_parity, double tol) {
  return validate(std::span<const double>(seq.deltas()), require_parity, tol);
}

PulseSequence uhrig(int n) {
  if (n < 2 || n % 2 != 0) throw DomainError("n must be even and positive (got " + std::to_string(n) + ")");
  const double step = std::numbers::pi / (2.0 * n + 2.0);
  std::vector<double> deltas(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double hi = std::sin((i + 1) * step);
    const double lo = std::sin(i * step);
    deltas[static_cast<std::size_t>(i)] = hi * hi - lo * lo;
  }
  return PulseSequence(std::move(deltas));
}

PulseSequence exact_n2() { return PulseSequence({0.25, 0.5, 0.25}); }

std::string_view to_string(Branch branch) {
  return branch == Branch::upper ? "upper" : "lower";
}

Branch parse_branch(std::string_view text) {
  if (text == "upper") return Branch::upper;
  if (text == "lower") return Branch::lower;
  throw InputError("branch must be 'upper' or 'lower', got '" + std::string(text) + "'");
}

FeasibilityInterval family_n4_interval() {
  const double edge = 1.0 / (2.0 * std::numbers::sqrt2);
  return {0.5 - edge, edge};
}

double family_n4_root(double delta1) {
  const double d = delta1;
  return std::sqrt(16.0 * d * d * d * d - 16.0 * d * d * d + 2.0 * d);
}

namespace {

void require_in_interval(double delta1) {
  const auto [lo, hi] = family_n4_interval();
  if (!(delta1 > lo && delta1 < hi)) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << "delta1 outside (" << lo << ", " << hi << ")";
    throw DomainError(os.str());
  }
}

// Sign s = +1 for the upper branch: delta_0 takes +r, delta_2 takes -r.
std::vector<double> family_fractions(double delta1, Branch branch) {
  const double s = branch == Branch::upper ? 1.0 : -1.0;
  const double d1 = delta1;
  const double r = family_n4_root(d1);
  const double d0 = 0.5 + s * r / (8.0 * d1) - 0.5 * d1;
  const double d2 = 1.0 / (8.0 * (1.0 - 2.0 * d1) * d1 - s * 4.0 * r);
  const double d3 = 0.5 - d1;
  const double d4 = 1.0 - (d0 + d1 + d2 + d3);
  return {d0, d1, d2, d3, d4};
}

}  // namespace

PulseSequence family_n4(double delta1, Branch branch) {
  require_in_interval(delta1);
  const std::vector<double> deltas = family_fractions(delta1, branch);
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) throw InfeasibleBranchError(i, deltas[i]);
  return PulseSequence(deltas);
}

std::vector<BranchSequence> family_n4_all(double delta1) {
  require_in_interval(delta1);
  std::vector<BranchSequence> out;
  for (Branch branch : {Branch::upper, Branch::lower}) {
    try {
      out.push_back({branch, family_n4(delta1, branch)});
    } catch (const InfeasibleBranchError&) {
    }
  }
  return out;
}

Delta4Diagnostics family_n4_delta4_diagnostics(double delta1, Branch branch) {
  require_in_interval(delta1);
  const double d = delta1;
  const double r = family_n4_root(d);
  const double q = 1.0 - 4.0 * d * d;
  const double denom = 4.0 - 8.0 * d;
  const double s = branch == Branch::upper ? 1.0 : -1.0;
  return {family_fractions(delta1, branch)[4], (r - q) / denom, (r + q) / denom,
          (q + s * r) / denom};
}

std::vector<double> pulse_times(const PulseSequence& seq, double total_time) {
  if (!(total_time > 0.0)) throw DomainError("total time must be positive");
  std::vector<double> times;
  times.reserve(seq.pulse_count());
  double elapsed = 0.0;
  for (std::size_t i = 0; i < seq.pulse_count(); ++i) {
    elapsed += seq[i];
    times.push_back(total_time * elapsed);
  }
  return times;
}

}  // namespace seldec
