#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "seldec/sequence.hpp"

namespace seldec {

struct ConstraintResiduals {
  double sum_defect = 0.0;     // sum delta - 1
  double parity_defect = 0.0;  // sum_even delta - 1/2
  double second_order = 0.0;   // S
  double third_cross = 0.0;    // C1 + C2
  double third_c1 = 0.0;
  double third_c2 = 0.0;
};

/// All order-condition scalars of a two- or four-pulse sequence.
ConstraintResiduals residuals(const PulseSequence& seq);
ConstraintResiduals residuals(std::span<const double> deltas);

/// Solves {sum = 1, parity, S = 0} for two pulses by elimination.
PulseSequence solve_n2();

struct SweepRow {
  double delta1;
  Branch branch;
  PulseSequence sequence;
  ConstraintResiduals residuals;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // ordered by delta1, then upper before lower
  std::size_t infeasible_branches = 0;
};

/// Samples `points` equispaced interior values of the feasibility interval.
SweepTable sweep_family_n4(int points);

struct FamilyScanPoint {
  double delta1;
  Branch branch;
  double c1;
  double c2;
};

struct ThirdOrderCandidate {
  double delta1;
  Branch branch;
  PulseSequence sequence;
  ConstraintResiduals residuals;
};

struct NewtonSummary {
  int starts = 0;
  int converged = 0;           // reached ||F|| <= tol from any start
  int converged_physical = 0;  // ... with every delta in (0, 1)
  std::vector<std::array<double, 5>> physical_solutions;
  double best_residual = 0.0;  // smallest ||F|| reached over all starts
};

struct ThirdOrderSearch {
  std::vector<ThirdOrderCandidate> candidates;
  std::vector<FamilyScanPoint> scan;  // every feasible grid point
  double min_abs_c1 = 0.0;
  double argmin_delta1 = 0.0;
  Branch argmin_branch = Branch::lower;
  std::optional<NewtonSummary> newton;
};

/// Looks for sequences that also cancel both third-order terms.
///
/// Scans C1 along every feasible branch of the four-pulse family, bisects
/// each sign change to 1e-12 in delta1, and keeps points with |C1| and |C2|
/// both below `refine_tol`. The smallest |C1| on the family is refined by
/// golden-section search and reported.
ThirdOrderSearch search_full_third_order(int grid, double refine_tol);

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// (sum - 1, sum_even - 1/2, S, C1, C2) at raw fractions x, no invariants.
Vec5 raw_system_n4(const Vec5& x);
/// Analytic Jacobian of raw_system_n4.
Mat5 raw_jacobian_n4(const Vec5& x);

/// Damped Newton on the raw system {sum = 1, sum_even = 1/2, S = 0, C1 = 0,
/// C2 = 0} from `starts` random points of the simplex.
NewtonSummary newton_search_n4(int starts, std::uint64_t seed, double tol = 1e-12);

/// CSV with header delta1,branch,d0,d1,d2,d3,d4,sum_defect,parity_defect,S,C1,C2,C1_plus_C2.
void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_candidates_csv(std::ostream& os, const std::vector<ThirdOrderCandidate>& candidates);

}  // namespace seldec
