#include "seldec/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "seldec/errors.hpp"

namespace seldec {

namespace {

constexpr double kNoiseFloor = 1e-13;

void require_positive_time(double total_time) {
  if (!(total_time > 0.0)) throw DomainError("total time must be positive");
}

}  // namespace

ComplexMatrix exact_propagator(const ComplexMatrix& h, const PulsePlan& plan,
                               const PulseSequence& seq, double total_time) {
  require_positive_time(total_time);
  if (h.rows() != plan.pulse.rows()) throw DimensionError("Hamiltonian and pulse differ in dimension");
  const auto& d = seq.deltas();
  ComplexMatrix u = exp_hermitian_generator(h, d[0] * total_time);
  for (std::size_t i = 1; i < d.size(); ++i)
    u = exp_hermitian_generator(h, d[i] * total_time) * (plan.pulse * u);
  return u;
}

ComplexMatrix rotated_segment_propagator(const ComplexMatrix& h, const PulsePlan& plan,
                                         const PulseSequence& seq, double total_time) {
  require_positive_time(total_time);
  const ComplexMatrix rotated = rotated_hamiltonian(h, plan);
  const auto& d = seq.deltas();
  ComplexMatrix u = ComplexMatrix::Identity(h.rows(), h.cols());
  for (std::size_t i = 0; i < d.size(); ++i)
    u = exp_hermitian_generator(i % 2 == 0 ? h : rotated, d[i] * total_time) * u;
  // An odd pulse count would leave a dangling R; pulse counts here are even.
  return u;
}

ComplexMatrix effective_hamiltonian(const ComplexMatrix& u, double total_time) {
  require_positive_time(total_time);
  // BranchCutError from the logarithm already advises a smaller T_f.
  return principal_log_unitary(u) / total_time;
}

ResidualMetrics residual_metrics(const ComplexMatrix& heff, const ComplexMatrix& h,
                                 const PulsePlan& plan) {
  if (heff.rows() != h.rows() || h.rows() != plan.pulse.rows())
    throw DimensionError("residual_metrics: dimension mismatch");
  const auto& partition = plan.system.partition();
  const BlockParts parts = block_split(heff, partition);
  const ComplexMatrix target = target_hamiltonian(h, plan);

  ResidualMetrics m;
  m.unwanted_residual = parts.offdiag_part.norm();
  m.wanted_deviation = (parts.diag_part - target).norm();

  const auto flip = partition.flip_indices();
  if (flip.size() > 1) {
    double worst = 0.0;
    for (std::size_t a = 0; a < flip.size(); ++a)
      for (std::size_t b = a + 1; b < flip.size(); ++b) {
        const auto i = static_cast<Eigen::Index>(flip[a]);
        const auto j = static_cast<Eigen::Index>(flip[b]);
        worst = std::max(worst, std::abs(heff(i, j) - h(i, j)));
      }
    m.preserved_coupling_deviation = worst;
  }
  return m;
}

EvaluationReport evaluate(const ComplexMatrix& h, const PulsePlan& plan, const PulseSequence& seq,
                          double total_time) {
  EvaluationReport report;
  report.total_time = total_time;
  report.propagator = exact_propagator(h, plan, seq, total_time);
  report.effective = effective_hamiltonian(report.propagator, total_time);
  report.metrics = residual_metrics(report.effective, h, plan);
  return report;
}

double max_branch_safe_time(const ComplexMatrix& h) {
  const double norm = spectral_norm(h);
  return norm > 0.0 ? (std::numbers::pi / 2.0) / norm : std::numeric_limits<double>::infinity();
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("line fit needs distinct abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

ScalingFit scaling_study(const ComplexMatrix& h, const PulsePlan& plan, const PulseSequence& seq,
                         double t_min, double t_max, int points) {
  if (!(t_min > 0.0 && t_min < t_max)) throw DomainError("need 0 < t_min < t_max");
  if (points < 5) throw DomainError("scaling study needs at least 5 points");
  if (!(t_max < max_branch_safe_time(h))) {
    std::ostringstream os;
    os << "t_max = " << t_max << " violates T_f * ||H||_2 < pi/2; use t_max < "
       << max_branch_safe_time(h);
    throw DomainError(os.str());
  }

  ScalingFit fit;
  const double floor = kNoiseFloor * h.norm();
  const double log_lo = std::log(t_min);
  const double log_hi = std::log(t_max);
  std::vector<double> xu, yu, xw, yw;
  for (int k = 0; k < points; ++k) {
    const double t = k == points - 1 ? t_max
                                     : std::exp(log_lo + (log_hi - log_lo) * k / (points - 1.0));
    const auto report = evaluate(h, plan, seq, t);
    fit.grid.push_back({t, report.metrics.unwanted_residual, report.metrics.wanted_deviation});

    const bool keep_u = report.metrics.unwanted_residual >= floor;
    const bool keep_w = report.metrics.wanted_deviation >= floor;
    if (keep_u) {
      xu.push_back(std::log(t));
      yu.push_back(std::log(report.metrics.unwanted_residual));
    }
    if (keep_w) {
      xw.push_back(std::log(t));
      yw.push_back(std::log(report.metrics.wanted_deviation));
    }
    if (!keep_u || !keep_w) ++fit.noise_floor_points_excluded;
  }
  if (xu.size() < 3 || xw.size() < 3) {
    throw FitError("fewer than 3 grid points above the noise floor; widen the T_f range toward larger times");
  }
  fit.slope_unwanted = fit_line(xu, yu).slope;
  fit.slope_wanted = fit_line(xw, yw).slope;
  return fit;
}

}  // namespace seldec
