#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seldec/errors.hpp"
#include "seldec/magnus.hpp"
#include "seldec/solver.hpp"

using namespace seldec;

namespace {

const double kUhrigC2 = (7.0 - 3.0 * std::sqrt(5.0)) / 64.0;

}  // namespace

TEST_CASE("residuals") {
  SUBCASE("exact n = 2") {
    const auto r = residuals(exact_n2());
    CHECK(r.sum_defect == 0.0);
    CHECK(r.parity_defect == 0.0);
    CHECK(r.second_order == 0.0);
    CHECK(r.third_cross == doctest::Approx(3.0 / 32.0).epsilon(1e-15));
    CHECK(r.third_c1 == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(r.third_c2 == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  }
  SUBCASE("uhrig(4)") {
    const auto r = residuals(uhrig(4));
    CHECK(std::abs(r.sum_defect) <= 1e-15);
    CHECK(std::abs(r.parity_defect) <= 1e-15);
    CHECK(std::abs(r.second_order) <= 1e-15);
    CHECK(std::abs(r.third_cross) <= 1e-15);
    CHECK(r.third_c1 == doctest::Approx(-kUhrigC2).epsilon(1e-12));
    CHECK(r.third_c2 == doctest::Approx(kUhrigC2).epsilon(1e-12));
  }
  SUBCASE("nonzero second order") {
    CHECK(residuals(PulseSequence({0.3, 0.5, 0.2})).second_order == doctest::Approx(0.05).epsilon(1e-14));
  }
  SUBCASE("unsupported n") {
    CHECK_THROWS_AS(residuals(uhrig(6)), DomainError);
  }
}

TEST_CASE("solve_n2") {
  const auto seq = solve_n2();
  CHECK(std::abs(seq[0] - 0.25) <= 1e-12);
  CHECK(std::abs(seq[1] - 0.5) <= 1e-12);
  CHECK(std::abs(seq[2] - 0.25) <= 1e-12);
  const auto r = residuals(seq);
  CHECK(std::abs(r.sum_defect) <= 1e-12);
  CHECK(std::abs(r.parity_defect) <= 1e-12);
  CHECK(std::abs(r.second_order) <= 1e-12);
  CHECK(validate(seq, true).passed);
  CHECK(seq == solve_n2());
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(seq[i] - uhrig(2)[i]) <= 1e-15);
}

TEST_CASE("sweep_family_n4") {
  const auto table = sweep_family_n4(99);
  CHECK(table.rows.size() >= 99);
  CHECK(table.rows.size() + table.infeasible_branches == 2 * 99);

  std::vector<double> seen;
  for (const auto& row : table.rows) {
    CHECK(validate(row.sequence, true).passed);
    CHECK(std::abs(row.residuals.sum_defect) <= 1e-10);
    CHECK(std::abs(row.residuals.parity_defect) <= 1e-10);
    CHECK(std::abs(row.residuals.second_order) <= 1e-10);
    CHECK(std::abs(row.residuals.third_cross) <= 1e-10);
    if (seen.empty() || seen.back() != row.delta1) seen.push_back(row.delta1);
  }
  CHECK(seen.size() == 99);
  for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] > seen[i - 1]);

  SUBCASE("middle row is the Uhrig sequence") {
    const auto& middle = table.rows[49];
    CHECK(middle.delta1 == doctest::Approx(0.25).epsilon(1e-14));
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(middle.sequence[i] - uhrig(4)[i]) <= 1e-9);
  }

  SUBCASE("fractions degenerate toward the interval ends") {
    auto min_delta = [](const PulseSequence& s) {
      return *std::min_element(s.deltas().begin(), s.deltas().end());
    };
    const auto fine = sweep_family_n4(999);
    CHECK(min_delta(fine.rows.front().sequence) < min_delta(table.rows.front().sequence));
    CHECK(min_delta(fine.rows.back().sequence) < min_delta(table.rows.back().sequence));
    CHECK(min_delta(fine.rows.front().sequence) < 1e-3);
    CHECK(min_delta(fine.rows.back().sequence) < 1e-3);
  }

  CHECK_THROWS_AS(sweep_family_n4(1), DomainError);
}

TEST_CASE("sweep CSV") {
  std::ostringstream a, b;
  write_sweep_csv(a, sweep_family_n4(5));
  write_sweep_csv(b, sweep_family_n4(5));
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  CHECK(text.rfind("delta1,branch,d0,d1,d2,d3,d4,sum_defect,parity_defect,S,C1,C2,C1_plus_C2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

TEST_CASE("search_full_third_order") {
  const auto search = search_full_third_order(1000, 1e-10);
  CHECK(search.candidates.empty());
  CHECK(search.scan.size() == 1000);  // only the lower branch is feasible

  // Regression pin: the smallest |C1| on the family sits at the Uhrig point.
  CHECK(search.argmin_branch == Branch::lower);
  CHECK(search.argmin_delta1 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::abs(search.min_abs_c1 - kUhrigC2) <= 1e-12);

  SUBCASE("Uhrig is not a full third-order solution") {
    const auto c1 = third_order_coefficients(family_n4(0.25, Branch::lower)).c1;
    CHECK(c1 == doctest::Approx(-0.004559313554697).epsilon(1e-10));
  }
  SUBCASE("a loose tolerance below min |C1| still finds nothing") {
    CHECK(search_full_third_order(1000, 0.004).candidates.empty());
  }
  SUBCASE("deterministic") {
    const auto again = search_full_third_order(1000, 1e-10);
    CHECK(again.min_abs_c1 == search.min_abs_c1);
    CHECK(again.argmin_delta1 == search.argmin_delta1);
  }
  CHECK_THROWS_AS(search_full_third_order(99, 1e-10), DomainError);
}

TEST_CASE("raw system Jacobian matches central differences") {
  Vec5 x;
  x << 0.11, 0.23, 0.31, 0.19, 0.16;
  const Mat5 analytic = raw_jacobian_n4(x);
  const double h = 1e-6;
  for (int j = 0; j < 5; ++j) {
    Vec5 xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    const Vec5 fd = (raw_system_n4(xp) - raw_system_n4(xm)) / (2 * h);
    CHECK((fd - analytic.col(j)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("Newton search on the raw system finds no physical solution") {
  const auto summary = newton_search_n4(200, 12345);
  CHECK(summary.starts == 200);
  CHECK(summary.converged_physical == 0);
  CHECK(summary.physical_solutions.empty());
  // No real root at all was reached from any start.
  CHECK(summary.converged == 0);
  CHECK(summary.best_residual > 1e-6);

  const auto again = newton_search_n4(200, 12345);
  CHECK(again.best_residual == summary.best_residual);
  CHECK(again.converged == summary.converged);
}
