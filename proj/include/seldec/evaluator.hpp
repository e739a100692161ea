#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "seldec/matrix.hpp"
#include "seldec/sequence.hpp"
#include "seldec/system.hpp"

namespace seldec {

/// e^{-iH tau_n} R e^{-iH tau_{n-1}} R ... R e^{-iH tau_0}.
ComplexMatrix exact_propagator(const ComplexMatrix& h, const PulsePlan& plan,
                               const PulseSequence& seq, double total_time);

/// e^{-iH tau_n} e^{-iH_R tau_{n-1}} ... e^{-iH tau_0}; equals exact_propagator
/// because R^2 = I.
ComplexMatrix rotated_segment_propagator(const ComplexMatrix& h, const PulsePlan& plan,
                                         const PulseSequence& seq, double total_time);

/// H_eff with U = e^{-i T_f H_eff}, principal branch.
ComplexMatrix effective_hamiltonian(const ComplexMatrix& u, double total_time);

struct ResidualMetrics {
  double unwanted_residual = 0.0;  // ||cross-block(H_eff)||_F
  double wanted_deviation = 0.0;   // ||block(H_eff) - H_T||_F
  /// Largest |(H_eff)_ij - H_ij| over off-diagonal couplings inside the
  /// flipped block (the e-f coupling for three levels). Empty if that block
  /// is a single level.
  std::optional<double> preserved_coupling_deviation;
};

ResidualMetrics residual_metrics(const ComplexMatrix& heff, const ComplexMatrix& h,
                                 const PulsePlan& plan);

struct EvaluationReport {
  ComplexMatrix propagator;
  ComplexMatrix effective;
  ResidualMetrics metrics;
  double total_time = 0.0;
};

EvaluationReport evaluate(const ComplexMatrix& h, const PulsePlan& plan, const PulseSequence& seq,
                          double total_time);

/// Largest T_f keeping T_f * ||H||_2 below pi/2.
double max_branch_safe_time(const ComplexMatrix& h);

struct ScalingPoint {
  double total_time;
  double unwanted_residual;
  double wanted_deviation;
};

struct ScalingFit {
  std::vector<ScalingPoint> grid;
  double slope_unwanted = 0.0;
  double slope_wanted = 0.0;
  /// Grid points dropped from at least one fit for sitting below the
  /// floating-point noise floor 1e-13 * ||H||_F.
  std::size_t noise_floor_points_excluded = 0;
};

struct LineFit {
  double slope;
  double intercept;
};

/// Least squares y = slope * x + intercept. Needs two distinct x values.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Residual metrics on `points` log-spaced times in [t_min, t_max] and the
/// log-log slopes of both residuals. Throws FitError when fewer than three
/// points of either series clear the noise floor.
ScalingFit scaling_study(const ComplexMatrix& h, const PulsePlan& plan, const PulseSequence& seq,
                         double t_min, double t_max, int points);

}  // namespace seldec
