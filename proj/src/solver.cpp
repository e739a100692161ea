#include "seldec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Dense>

#include "seldec/errors.hpp"
#include "seldec/format.hpp"
#include "seldec/magnus.hpp"

namespace seldec {

ConstraintResiduals residuals(std::span<const double> deltas) {
  if (deltas.size() != 3 && deltas.size() != 5) {
    throw DomainError("residuals are defined for n = 2 or 4 only");
  }
  ConstraintResiduals r;
  double even = 0.0;
  for (std::size_t i = 0; i < deltas.size(); i += 2) even += deltas[i];
  r.sum_defect = std::accumulate(deltas.begin(), deltas.end(), 0.0) - 1.0;
  r.parity_defect = even - 0.5;
  r.second_order = second_order_coefficient(deltas);
  const auto c = third_order_coefficients(deltas);
  r.third_c1 = c.c1;
  r.third_c2 = c.c2;
  r.third_cross = c.c1 + c.c2;
  return r;
}

ConstraintResiduals residuals(const PulseSequence& seq) {
  return residuals(std::span<const double>(seq.deltas()));
}

PulseSequence solve_n2() {
  // sum = 1 and sum_even = 1/2 fix delta_1 = 1/2. S = delta_1 (delta_0 - delta_2)
  // then vanishes only for delta_0 = delta_2, which parity pins to 1/4.
  const double delta1 = 1.0 - 0.5;
  if (delta1 == 0.0) throw NumericalError("solve_n2: degenerate elimination");
  const double delta0 = 0.5 / 2.0;
  const double delta2 = 0.5 - delta0;
  PulseSequence seq({delta0, delta1, delta2});

  const auto r = residuals(seq);
  const double worst = std::max({std::abs(r.sum_defect), std::abs(r.parity_defect),
                                 std::abs(r.second_order)});
  if (!(worst <= kFractionTolerance)) throw NumericalError("solve_n2: residual check failed");
  return seq;
}

namespace {

std::vector<double> interior_grid(int points) {
  const auto [lo, hi] = family_n4_interval();
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int k = 1; k <= points; ++k) grid.push_back(lo + (hi - lo) * k / (points + 1.0));
  return grid;
}

std::optional<PulseSequence> try_family(double delta1, Branch branch) {
  try {
    return family_n4(delta1, branch);
  } catch (const InfeasibleBranchError&) {
    return std::nullopt;
  }
}

double c1_at(double delta1, Branch branch) {
  return third_order_coefficients(family_n4(delta1, branch)).c1;
}

// Bisection on a bracketed sign change of C1.
double bisect_c1(double a, double b, Branch branch) {
  double fa = c1_at(a, branch);
  while (b - a > 1e-12) {
    const double mid = 0.5 * (a + b);
    const double fm = c1_at(mid, branch);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Golden-section minimization of |C1| on [a, b].
double golden_min_abs_c1(double a, double b, Branch branch) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = std::abs(c1_at(x1, branch));
  double f2 = std::abs(c1_at(x2, branch));
  while (b - a > 1e-12) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = std::abs(c1_at(x1, branch));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = std::abs(c1_at(x2, branch));
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Vec5 raw_system_n4(const Vec5& x) {
  const std::array<double, 5> d{x(0), x(1), x(2), x(3), x(4)};
  const auto r = residuals(std::span<const double>(d));
  Vec5 f;
  f << r.sum_defect, r.parity_defect, r.second_order, r.third_c1, r.third_c2;
  return f;
}

Mat5 raw_jacobian_n4(const Vec5& x) {
  const double d0 = x(0), d1 = x(1), d2 = x(2), d3 = x(3), d4 = x(4);
  const double p = d1 + d3;
  const double e = d0 + d2 + d4;
  const double q = d2 * d2 + d4 * d4 + d0 * d0 - 4.0 * d4 * d0;
  Mat5 j;
  j.row(0) << 1, 1, 1, 1, 1;
  j.row(1) << 1, 0, 1, 0, 1;
  j.row(2) << p, d0 - d2 - d4, d3 - d1, d0 + d2 - d4, -p;
  j.row(3) << -0.5 * p * (2.0 * d0 - 4.0 * d4) + 2.0 * d1 * d2 - d2 * d3,
      -0.5 * q + d2 * (2.0 * d0 - d4),
      -p * d2 + d1 * (2.0 * d0 - d4) + d3 * (2.0 * d4 - d0),
      -0.5 * q + d2 * (2.0 * d4 - d0),
      -0.5 * p * (2.0 * d4 - 4.0 * d0) - d1 * d2 + 2.0 * d2 * d3;
  j.row(4) << 0.5 * p * p, p * e - 3.0 * d2 * d3, 0.5 * p * p - 3.0 * d1 * d3,
      p * e - 3.0 * d1 * d2, 0.5 * p * p;
  return j;
}

SweepTable sweep_family_n4(int points) {
  if (points < 2) throw DomainError("sweep needs at least 2 points");
  SweepTable table;
  for (double delta1 : interior_grid(points)) {
    for (Branch branch : {Branch::upper, Branch::lower}) {
      if (auto seq = try_family(delta1, branch)) {
        table.rows.push_back({delta1, branch, *seq, residuals(*seq)});
      } else {
        ++table.infeasible_branches;
      }
    }
  }
  return table;
}

ThirdOrderSearch search_full_third_order(int grid, double refine_tol) {
  if (grid < 100) throw DomainError("search grid must have at least 100 points");
  ThirdOrderSearch out;
  out.min_abs_c1 = std::numeric_limits<double>::infinity();
  const std::vector<double> xs = interior_grid(grid);

  for (Branch branch : {Branch::upper, Branch::lower}) {
    std::vector<std::pair<double, double>> feasible;  // (delta1, C1)
    for (double x : xs) {
      if (auto seq = try_family(x, branch)) {
        const auto c = third_order_coefficients(*seq);
        out.scan.push_back({x, branch, c.c1, c.c2});
        feasible.emplace_back(x, c.c1);
      }
    }
    if (feasible.empty()) continue;

    std::vector<double> roots;
    for (std::size_t i = 0; i < feasible.size(); ++i) {
      if (feasible[i].second == 0.0) {
        roots.push_back(feasible[i].first);
      } else if (i + 1 < feasible.size() && (feasible[i].second < 0.0) != (feasible[i + 1].second < 0.0) &&
                 feasible[i + 1].second != 0.0) {
        roots.push_back(bisect_c1(feasible[i].first, feasible[i + 1].first, branch));
      }
    }
    for (double root : roots) {
      auto seq = try_family(root, branch);
      if (!seq) continue;
      const auto r = residuals(*seq);
      if (std::abs(r.third_c1) <= refine_tol && std::abs(r.third_c2) <= refine_tol)
        out.candidates.push_back({root, branch, *seq, r});
    }

    const auto best = std::min_element(feasible.begin(), feasible.end(), [](auto& a, auto& b) {
      return std::abs(a.second) < std::abs(b.second);
    });
    const std::size_t i = static_cast<std::size_t>(best - feasible.begin());
    const double a = feasible[i == 0 ? 0 : i - 1].first;
    const double b = feasible[std::min(i + 1, feasible.size() - 1)].first;
    const double x = golden_min_abs_c1(a, b, branch);
    const double value = std::abs(c1_at(x, branch));
    if (value < out.min_abs_c1) {
      out.min_abs_c1 = value;
      out.argmin_delta1 = x;
      out.argmin_branch = branch;
    }
  }
  return out;
}

NewtonSummary newton_search_n4(int starts, std::uint64_t seed, double tol) {
  NewtonSummary summary;
  summary.starts = starts;
  summary.best_residual = std::numeric_limits<double>::infinity();

  for (int s = 0; s < starts; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> expo(1.0);
    Vec5 x;
    for (int i = 0; i < 5; ++i) x(i) = expo(rng);
    x /= x.sum();

    Vec5 f = raw_system_n4(x);
    double norm = f.norm();
    for (int iter = 0; iter < 200 && norm > tol; ++iter) {
      const Mat5 jac = raw_jacobian_n4(x);
      const Vec5 step = jac.completeOrthogonalDecomposition().solve(-f);
      if (!step.allFinite()) break;
      double lambda = 1.0;
      bool improved = false;
      while (lambda > 1e-10) {
        const Vec5 trial = x + lambda * step;
        const Vec5 ft = raw_system_n4(trial);
        if (ft.norm() < norm) {
          x = trial;
          f = ft;
          norm = ft.norm();
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
    }

    summary.best_residual = std::min(summary.best_residual, norm);
    if (norm <= tol) {
      ++summary.converged;
      if ((x.array() > 0.0).all() && (x.array() < 1.0).all()) {
        ++summary.converged_physical;
        summary.physical_solutions.push_back({x(0), x(1), x(2), x(3), x(4)});
      }
    }
  }
  return summary;
}

namespace {

void write_row(std::ostream& os, double delta1, Branch branch, const PulseSequence& seq,
               const ConstraintResiduals& r) {
  os << format_double(delta1) << ',' << to_string(branch);
  for (double d : seq.deltas()) os << ',' << format_double(d);
  os << ',' << format_double(r.sum_defect) << ',' << format_double(r.parity_defect) << ','
     << format_double(r.second_order) << ',' << format_double(r.third_c1) << ','
     << format_double(r.third_c2) << ',' << format_double(r.third_cross) << '\n';
}

constexpr const char* kSweepHeader =
    "delta1,branch,d0,d1,d2,d3,d4,sum_defect,parity_defect,S,C1,C2,C1_plus_C2\n";

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << kSweepHeader;
  for (const auto& row : table.rows) write_row(os, row.delta1, row.branch, row.sequence, row.residuals);
}

void write_candidates_csv(std::ostream& os, const std::vector<ThirdOrderCandidate>& candidates) {
  os << kSweepHeader;
  for (const auto& c : candidates) write_row(os, c.delta1, c.branch, c.sequence, c.residuals);
}

}  // namespace seldec
