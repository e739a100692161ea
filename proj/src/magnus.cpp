#include "seldec/magnus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "seldec/errors.hpp"

namespace seldec {

namespace {

constexpr Complex kI(0.0, 1.0);

// Measure of {t1 in I_j, t2 in I_k, t3 in I_l, t1 > t2 > t3} in units of T_f^3.
double simplex_weight(std::size_t j, std::size_t k, std::size_t l, const std::vector<Segment>& s) {
  const double dj = s[j].fraction;
  const double dk = s[k].fraction;
  const double dl = s[l].fraction;
  if (j > k && k > l) return dj * dk * dl;
  if (j == k && k > l) return dj * dj * dl / 2.0;
  if (j > k && k == l) return dj * dk * dk / 2.0;
  return dj * dj * dj / 6.0;
}

}  // namespace

PiecewiseGenerator::PiecewiseGenerator(const ComplexMatrix& h, const PulsePlan& plan,
                                       const PulseSequence& seq)
    : rotated_(rotated_hamiltonian(h, plan)) {
  segments_.reserve(seq.deltas().size());
  for (std::size_t i = 0; i < seq.deltas().size(); ++i)
    segments_.push_back({i % 2 == 0 ? h : rotated_, seq[i]});
}

ComplexMatrix omega_sum(int order, const PiecewiseGenerator& gen, double total_time) {
  if (!(total_time > 0.0)) throw DomainError("total time must be positive");
  const auto& seg = gen.segments();
  const Eigen::Index dim = seg.front().hamiltonian.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  const double t = total_time;

  switch (order) {
    case 1:
      for (const auto& s : seg) acc += s.fraction * s.hamiltonian;
      return -kI * t * acc;
    case 2:
      for (std::size_t j = 0; j < seg.size(); ++j)
        for (std::size_t k = 0; k < j; ++k)
          acc += seg[j].fraction * seg[k].fraction *
                 commutator(seg[j].hamiltonian, seg[k].hamiltonian);
      return -(t * t / 2.0) * acc;
    case 3:
      for (std::size_t j = 0; j < seg.size(); ++j)
        for (std::size_t k = 0; k <= j; ++k)
          for (std::size_t l = 0; l <= k; ++l) {
            if (j == l) continue;  // all three on one interval: both commutators vanish
            const auto& hj = seg[j].hamiltonian;
            const auto& hk = seg[k].hamiltonian;
            const auto& hl = seg[l].hamiltonian;
            acc += simplex_weight(j, k, l, seg) *
                   (commutator(hj, commutator(hk, hl)) + commutator(hl, commutator(hk, hj)));
          }
      return (kI * t * t * t / 6.0) * acc;
    default:
      throw DomainError("Magnus order " + std::to_string(order) + " is not supported (1-3)");
  }
}

ComplexMatrix effective_term(int order, const PiecewiseGenerator& gen, double total_time) {
  return (kI / total_time) * omega_sum(order, gen, total_time);
}

double second_order_coefficient(const PulseSequence& seq) {
  return second_order_coefficient(std::span<const double>(seq.deltas()));
}

double second_order_coefficient(std::span<const double> d) {
  if (d.size() % 2 == 0) throw DomainError("expected an odd number of fractions");
  const std::size_t half = d.size() / 2;
  double s = 0.0;
  double even_prefix = 0.0;  // sum_{k<j} delta_{2k}
  double odd_prefix = 0.0;   // sum_{k<j} delta_{2k+1}
  for (std::size_t j = 1; j <= half; ++j) {
    even_prefix += d[2 * j - 2];
    s += d[2 * j - 1] * even_prefix;
    odd_prefix += d[2 * j - 1];
    s -= d[2 * j] * odd_prefix;
  }
  return s;
}

ThirdOrderCoefficients third_order_coefficients(const PulseSequence& seq) {
  return third_order_coefficients(std::span<const double>(seq.deltas()));
}

ThirdOrderCoefficients third_order_coefficients(std::span<const double> deltas) {
  if (deltas.size() != 3 && deltas.size() != 5) {
    throw DomainError("third-order coefficients are only available for n = 2 or 4 (got n = " +
                      std::to_string(deltas.empty() ? 0 : deltas.size() - 1) + ")");
  }
  std::array<double, 5> d{};
  std::copy(deltas.begin(), deltas.end(), d.begin());
  const double d0 = d[0], d1 = d[1], d2 = d[2], d3 = d[3], d4 = d[4];
  const double c1 = -0.5 * (d1 + d3) * (d2 * d2 + d4 * d4 + d0 * d0 - 4.0 * d4 * d0) +
                    d1 * d2 * (2.0 * d0 - d4) + d2 * d3 * (2.0 * d4 - d0);
  const double c2 = 0.5 * (d1 + d3) * (d1 + d3) * (d0 + d2 + d4) - 3.0 * d1 * d2 * d3;
  return {c1, c2};
}

ComplexMatrix closed_form_second_order(const ComplexMatrix& h, const ComplexMatrix& rotated,
                                       double s, double total_time) {
  return (kI * total_time / 2.0 * s) * commutator(h, rotated);
}

ComplexMatrix third_order_basis(const ComplexMatrix& h, const ComplexMatrix& rotated,
                                const ThirdOrderCoefficients& c, double total_time) {
  const ComplexMatrix inner = commutator(rotated, h);
  return total_time * total_time *
         (c.c1 * commutator(h, inner) + c.c2 * commutator(rotated, inner));
}

MagnusReport closed_form_report(const PulseSequence& seq, const ComplexMatrix& h,
                                const PulsePlan& plan, double total_time) {
  const PiecewiseGenerator gen(h, plan, seq);
  MagnusReport report;
  report.heff_1 = effective_term(1, gen, total_time);
  report.heff_2 = effective_term(2, gen, total_time);
  report.heff_3 = effective_term(3, gen, total_time);
  report.s = second_order_coefficient(seq);

  double even = 0.0;
  double odd = 0.0;
  for (std::size_t i = 0; i < seq.deltas().size(); ++i) (i % 2 == 0 ? even : odd) += seq[i];
  const ComplexMatrix first = even * h + odd * gen.rotated();

  report.oracle_deviation.push_back(relative_deviation(report.heff_1, first));
  report.oracle_deviation.push_back(relative_deviation(
      report.heff_2, closed_form_second_order(h, gen.rotated(), report.s, total_time)));

  if (seq.pulse_count() <= 4) {
    const auto c = third_order_coefficients(seq);
    report.c1 = c.c1;
    report.c2 = c.c2;
    report.has_third_order_closed_form = true;
    report.oracle_deviation.push_back(relative_deviation(
        report.heff_3,
        kThirdOrderNormalization * third_order_basis(h, gen.rotated(), c, total_time)));
  }
  return report;
}

OracleComparison closed_form_vs_oracle(const PulseSequence& seq, const PulsePlan& plan,
                                       double total_time, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  OracleComparison out;
  out.trials = trials;
  out.seed = seed;
  out.has_third_order = seq.pulse_count() <= 4;

  const double s = second_order_coefficient(seq);
  const auto dim = plan.system.dim();
  std::vector<ComplexMatrix> oracle3;
  std::vector<ComplexMatrix> basis3;
  double numerator = 0.0;
  double denominator = 0.0;

  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix h = random_hermitian(dim, seed, static_cast<std::uint64_t>(t));
    const PiecewiseGenerator gen(h, plan, seq);

    out.max_first_order_deviation =
        std::max(out.max_first_order_deviation,
                 relative_deviation(effective_term(1, gen, total_time),
                                    target_hamiltonian(h, plan)));
    out.max_second_order_deviation = std::max(
        out.max_second_order_deviation,
        relative_deviation(effective_term(2, gen, total_time),
                           closed_form_second_order(h, gen.rotated(), s, total_time)));

    if (out.has_third_order) {
      const ComplexMatrix heff3 = effective_term(3, gen, total_time);
      const ComplexMatrix basis =
          third_order_basis(h, gen.rotated(), third_order_coefficients(seq), total_time);
      numerator += basis.cwiseProduct(heff3.conjugate()).sum().real();
      denominator += basis.squaredNorm();

      const double hn = h.norm();
      const double cross = block_split(heff3, plan.system.partition()).offdiag_part.norm();
      out.max_third_order_cross_block =
          std::max(out.max_third_order_cross_block, cross / (total_time * total_time * hn * hn * hn));
      oracle3.push_back(heff3);
      basis3.push_back(basis);
    }
  }

  if (out.has_third_order) {
    out.fitted_alpha = denominator > 0.0 ? numerator / denominator : 0.0;
    for (std::size_t t = 0; t < oracle3.size(); ++t)
      out.max_third_order_deviation =
          std::max(out.max_third_order_deviation,
                   relative_deviation(oracle3[t], out.fitted_alpha * basis3[t]));
  }
  return out;
}

}  // namespace seldec
