// Command-line front end: sequence design, exact evaluation, scaling scans,
// order-condition solving and Magnus cross-checks.

#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "seldec/errors.hpp"
#include "seldec/evaluator.hpp"
#include "seldec/format.hpp"
#include "seldec/io.hpp"
#include "seldec/magnus.hpp"
#include "seldec/sequence.hpp"
#include "seldec/solver.hpp"
#include "seldec/system.hpp"

#ifndef SELDEC_VERSION
#define SELDEC_VERSION "0.0.0"
#endif

namespace {

using seldec::io::json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::uint64_t seed = 20240917;
  std::string out;
  std::optional<double> tol;
};

struct Context {
  std::string command;
  GlobalOptions global;
  json params = json::object();
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const Context& ctx, const std::filesystem::path& output) {
  json manifest = {{"command", ctx.command},
                   {"parameters", ctx.params},
                   {"seed", ctx.global.seed},
                   {"tool_version", SELDEC_VERSION},
                   {"timestamp", utc_timestamp()},
                   {"output", output.filename().string()}};
  std::filesystem::path path = output;
  path += ".manifest.json";
  seldec::io::write_file_atomic(path, seldec::io::dump(manifest));
}

/// Writes to --out (plus manifest) when given, otherwise to stdout.
void emit(const Context& ctx, const std::string& text) {
  if (ctx.global.out.empty()) {
    std::cout << text;
    return;
  }
  seldec::io::write_file_atomic(ctx.global.out, text);
  write_manifest(ctx, ctx.global.out);
}

void emit_file(const Context& ctx, const std::string& path, const std::string& text) {
  seldec::io::write_file_atomic(path, text);
  write_manifest(ctx, path);
}

json residuals_json(const seldec::ConstraintResiduals& r) {
  return {{"sum_defect", r.sum_defect}, {"parity_defect", r.parity_defect},
          {"S", r.second_order},        {"C1", r.third_c1},
          {"C2", r.third_c2},           {"C1_plus_C2", r.third_cross}};
}

double tol_or(const GlobalOptions& g, double fallback) { return g.tol.value_or(fallback); }

// ---------------------------------------------------------------- commands

int run_uhrig(Context& ctx, int n) {
  ctx.params = {{"n", n}};
  emit(ctx, seldec::io::dump(seldec::io::sequence_to_json(seldec::uhrig(n))));
  return 0;
}

int run_design(Context& ctx, int n, std::optional<double> delta1, const std::string& branch) {
  ctx.params = {{"n", n}, {"branch", branch}};
  if (delta1) ctx.params["delta1"] = *delta1;

  if (n == 2) {
    if (delta1) throw seldec::InputError("--delta1 only applies to n = 4");
    const auto seq = seldec::solve_n2();
    json out = seldec::io::sequence_to_json(seq);
    out["residuals"] = residuals_json(seldec::residuals(seq));
    emit(ctx, seldec::io::dump(out));
    return 0;
  }
  if (n != 4) throw seldec::DomainError("design supports n = 2 or n = 4 (got " + std::to_string(n) + ")");
  if (!delta1) throw seldec::InputError("--delta1 is required for n = 4");

  std::vector<seldec::BranchSequence> feasible;
  if (branch == "auto") {
    feasible = seldec::family_n4_all(*delta1);
    if (feasible.empty()) throw seldec::DomainError("no feasible branch at this delta1");
  } else {
    const auto b = seldec::parse_branch(branch);
    feasible.push_back({b, seldec::family_n4(*delta1, b)});
  }

  const auto& chosen = feasible.front();
  json out = seldec::io::sequence_to_json(chosen.sequence);
  out["branch"] = std::string(seldec::to_string(chosen.branch));
  out["residuals"] = residuals_json(seldec::residuals(chosen.sequence));
  json table = json::array();
  for (const auto& row : feasible) {
    const auto diag = seldec::family_n4_delta4_diagnostics(*delta1, row.branch);
    table.push_back({{"branch", std::string(seldec::to_string(row.branch))},
                     {"deltas", row.sequence.deltas()},
                     {"residuals", residuals_json(seldec::residuals(row.sequence))},
                     {"delta4_closed_forms",
                      {{"from_sum", diag.from_sum},
                       {"printed_upper_sign", diag.printed_upper},
                       {"printed_lower_sign", diag.printed_lower},
                       {"matching", diag.matching}}}});
  }
  out["branches"] = std::move(table);
  emit(ctx, seldec::io::dump(out));
  return 0;
}

struct LoadedProblem {
  seldec::io::SystemConfig config;
  seldec::PulsePlan plan;
  seldec::PulseSequence sequence;
};

LoadedProblem load_problem(const GlobalOptions& g, const std::string& system_file,
                           const std::string& sequence_file) {
  auto config = seldec::io::system_config_from_json(seldec::io::read_json_file(system_file),
                                                    tol_or(g, seldec::kDefaultTolerance));
  auto plan = seldec::pulse_operator(config.system);
  auto seq = seldec::io::sequence_from_json(seldec::io::read_json_file(sequence_file));
  return {std::move(config), std::move(plan), std::move(seq)};
}

void require_branch_safe(const seldec::ComplexMatrix& h, double tf) {
  const double limit = seldec::max_branch_safe_time(h);
  if (!(tf < limit)) {
    std::ostringstream os;
    os << "tf = " << seldec::format_double(tf)
       << " is too large for a reliable effective Hamiltonian; use tf < "
       << seldec::format_double(limit);
    throw seldec::NumericalError(os.str());
  }
}

int run_evaluate(Context& ctx, const std::string& system_file, const std::string& sequence_file,
                 double tf) {
  ctx.params = {{"system", system_file}, {"sequence", sequence_file}, {"tf", tf}};
  const auto problem = load_problem(ctx.global, system_file, sequence_file);
  if (!(tf > 0.0)) throw seldec::DomainError("tf must be positive");
  require_branch_safe(problem.config.hamiltonian, tf);
  const auto report = seldec::evaluate(problem.config.hamiltonian, problem.plan, problem.sequence, tf);
  emit(ctx, seldec::io::dump(seldec::io::evaluation_to_json(report)));
  return 0;
}

int run_scan(Context& ctx, const std::string& system_file, const std::string& sequence_file,
             std::optional<double> tf_min, std::optional<double> tf_max, int points,
             const std::string& csv_path) {
  const auto problem = load_problem(ctx.global, system_file, sequence_file);
  const double norm = seldec::spectral_norm(problem.config.hamiltonian);
  if (!(norm > 0.0)) throw seldec::DomainError("the Hamiltonian is zero; nothing to scan");
  const double lo = tf_min.value_or(1e-3 / norm);
  const double hi = tf_max.value_or(1e-1 / norm);
  ctx.params = {{"system", system_file}, {"sequence", sequence_file}, {"tf_min", lo},
                {"tf_max", hi},          {"points", points},          {"csv", csv_path}};
  require_branch_safe(problem.config.hamiltonian, hi);

  const auto fit = seldec::scaling_study(problem.config.hamiltonian, problem.plan, problem.sequence,
                                         lo, hi, points);
  std::ostringstream csv;
  seldec::io::write_scaling_csv(csv, fit);
  if (csv_path.empty()) {
    std::cerr << csv.str();
  } else {
    emit_file(ctx, csv_path, csv.str());
  }
  emit(ctx, seldec::io::dump(seldec::io::scaling_fit_to_json(fit)));
  return 0;
}

int run_solve(Context& ctx, int n, int sweep) {
  ctx.params = {{"n", n}, {"sweep", sweep}};
  if (n == 2) {
    const auto seq = seldec::solve_n2();
    json out = seldec::io::sequence_to_json(seq);
    out["residuals"] = residuals_json(seldec::residuals(seq));
    emit(ctx, seldec::io::dump(out));
    return 0;
  }
  if (n != 4) throw seldec::DomainError("solve supports n = 2 or n = 4");
  const auto table = seldec::sweep_family_n4(sweep);
  std::ostringstream csv;
  seldec::write_sweep_csv(csv, table);
  emit(ctx, csv.str());
  std::cerr << table.rows.size() << " feasible rows, " << table.infeasible_branches
            << " infeasible branches omitted\n";
  return 0;
}

int run_search_exact(Context& ctx, int grid, int newton_starts, const std::string& scan_csv) {
  const double refine_tol = tol_or(ctx.global, 1e-10);
  ctx.params = {{"grid", grid},
                {"refine_tol", refine_tol},
                {"newton_starts", newton_starts},
                {"scan_csv", scan_csv}};
  auto search = seldec::search_full_third_order(grid, refine_tol);
  const auto newton = seldec::newton_search_n4(newton_starts, ctx.global.seed);

  json candidates = json::array();
  for (const auto& c : search.candidates)
    candidates.push_back({{"delta1", c.delta1},
                          {"branch", std::string(seldec::to_string(c.branch))},
                          {"deltas", c.sequence.deltas()},
                          {"residuals", residuals_json(c.residuals)}});
  json physical = json::array();
  for (const auto& s : newton.physical_solutions) physical.push_back(s);

  json out = {{"grid", grid},
              {"refine_tol", refine_tol},
              {"candidates", std::move(candidates)},
              {"scan_points", search.scan.size()},
              {"min_abs_c1", search.min_abs_c1},
              {"argmin_delta1", search.argmin_delta1},
              {"argmin_branch", std::string(seldec::to_string(search.argmin_branch))},
              {"newton",
               {{"starts", newton.starts},
                {"seed", ctx.global.seed},
                {"converged", newton.converged},
                {"converged_physical", newton.converged_physical},
                {"physical_solutions", std::move(physical)},
                {"best_residual", newton.best_residual}}}};

  if (!scan_csv.empty()) {
    std::ostringstream csv;
    csv << "delta1,branch,C1,C2\n";
    for (const auto& p : search.scan)
      csv << seldec::format_double(p.delta1) << ',' << seldec::to_string(p.branch) << ','
          << seldec::format_double(p.c1) << ',' << seldec::format_double(p.c2) << '\n';
    emit_file(ctx, scan_csv, csv.str());
  }
  emit(ctx, seldec::io::dump(out));
  return 0;
}

int run_magnus_check(Context& ctx, int order, int trials, const std::string& sequence_file,
                     double tf) {
  if (order < 1 || order > 3)
    throw seldec::DomainError("Magnus order " + std::to_string(order) + " is unsupported (1-3)");
  const auto seq = sequence_file.empty()
                       ? (order == 3 ? seldec::uhrig(4) : seldec::PulseSequence({0.3, 0.5, 0.2}))
                       : seldec::io::sequence_from_json(seldec::io::read_json_file(sequence_file));
  ctx.params = {{"order", order}, {"trials", trials}, {"sequence", seq.deltas()}, {"tf", tf}};

  const seldec::PulsePlan plan = seldec::pulse_operator(seldec::LevelSystem());
  const auto cmp = seldec::closed_form_vs_oracle(seq, plan, tf, trials, ctx.global.seed);

  json out = {{"order", order}, {"trials", trials}, {"seed", ctx.global.seed},
              {"tf", tf},       {"deltas", seq.deltas()}};
  switch (order) {
    case 1:
      out["max_relative_deviation"] = cmp.max_first_order_deviation;
      out["compared_with"] = "H_T";
      break;
    case 2:
      out["max_relative_deviation"] = cmp.max_second_order_deviation;
      out["S"] = seldec::second_order_coefficient(seq);
      out["convention"] = seldec::kSecondOrderConvention;
      break;
    case 3: {
      if (!cmp.has_third_order) throw seldec::DomainError("third-order closed form needs n <= 4");
      const auto c = seldec::third_order_coefficients(seq);
      out["fitted_alpha"] = cmp.fitted_alpha;
      out["frozen_alpha"] = seldec::kThirdOrderNormalization;
      out["max_relative_deviation"] = cmp.max_third_order_deviation;
      out["max_cross_block_scaled"] = cmp.max_third_order_cross_block;
      out["C1"] = c.c1;
      out["C2"] = c.c2;
      out["convention"] = seldec::kThirdOrderConvention;
      break;
    }
  }
  emit(ctx, seldec::io::dump(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and verify selective dynamical-decoupling pulse sequences"};
  app.set_version_flag("--version", SELDEC_VERSION);
  app.require_subcommand(1);

  Context ctx;
  app.add_option("--seed", ctx.global.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", ctx.global.out,
                 "Write the main output to this path (atomically, with a .manifest.json)");
  app.add_option("--tol", ctx.global.tol,
                 "search-exact: refinement tolerance (default 1e-10); evaluate/scan: Hermiticity "
                 "tolerance of the system file (default 1e-12)");

  int n = 0;
  auto* uhrig_cmd = app.add_subcommand("uhrig", "Print the Uhrig sequence for n pulses");
  uhrig_cmd->add_option("--n", n, "Even number of pulses")->required();

  int design_n = 0;
  std::optional<double> delta1;
  std::string branch = "auto";
  auto* design_cmd = app.add_subcommand("design", "Design a sequence meeting the order conditions");
  design_cmd->add_option("--n", design_n, "2 or 4")->required();
  design_cmd->add_option("--delta1", delta1, "Family parameter (n = 4 only)");
  design_cmd->add_option("--branch", branch, "upper, lower or auto")->capture_default_str();

  std::string system_file, sequence_file;
  double tf = 0.0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Exact propagation and effective-Hamiltonian residuals");
  eval_cmd->add_option("--system", system_file, "System config JSON")->required();
  eval_cmd->add_option("--sequence", sequence_file, "Sequence JSON")->required();
  eval_cmd->add_option("--tf", tf, "Total evolution time")->required();

  std::optional<double> tf_min, tf_max;
  int points = 9;
  std::string csv_path;
  auto* scan_cmd = app.add_subcommand("scan", "Residual scaling with total time");
  scan_cmd->add_option("--system", system_file, "System config JSON")->required();
  scan_cmd->add_option("--sequence", sequence_file, "Sequence JSON")->required();
  scan_cmd->add_option("--tf-min", tf_min, "Smallest T_f (default 1e-3/||H||)");
  scan_cmd->add_option("--tf-max", tf_max, "Largest T_f (default 1e-1/||H||)");
  scan_cmd->add_option("--points", points, "Log-spaced grid size")->capture_default_str();
  scan_cmd->add_option("--csv", csv_path, "Scan table path (stderr when omitted)");

  int solve_n = 4;
  int sweep = 99;
  auto* solve_cmd = app.add_subcommand("solve", "Solve n = 2 or sweep the n = 4 family to CSV");
  solve_cmd->add_option("--n", solve_n, "2 or 4")->capture_default_str();
  solve_cmd->add_option("--sweep", sweep, "Interior delta1 samples")->capture_default_str();

  int grid = 1000;
  int newton_starts = 200;
  std::string scan_csv;
  auto* search_cmd =
      app.add_subcommand("search-exact", "Search for sequences cancelling all third-order terms");
  search_cmd->add_option("--grid", grid, "Points per family branch")->capture_default_str();
  search_cmd->add_option("--newton-starts", newton_starts, "Random Newton starts on the raw system")
      ->capture_default_str();
  search_cmd->add_option("--scan-csv", scan_csv, "Write the C1/C2 scan table here");

  int order = 2;
  int trials = 100;
  std::string magnus_sequence;
  double magnus_tf = 1.0;
  auto* magnus_cmd =
      app.add_subcommand("magnus-check", "Compare closed-form Magnus terms with ordered sums");
  magnus_cmd->add_option("--order", order, "1, 2 or 3")->capture_default_str();
  magnus_cmd->add_option("--trials", trials, "Random Hamiltonians")->capture_default_str();
  magnus_cmd->add_option("--sequence", magnus_sequence,
                         "Sequence JSON (default (0.3, 0.5, 0.2), or uhrig(4) for order 3)");
  magnus_cmd->add_option("--tf", magnus_tf, "Total time")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (uhrig_cmd->parsed()) {
      ctx.command = "uhrig";
      return run_uhrig(ctx, n);
    }
    if (design_cmd->parsed()) {
      ctx.command = "design";
      return run_design(ctx, design_n, delta1, branch);
    }
    if (eval_cmd->parsed()) {
      ctx.command = "evaluate";
      return run_evaluate(ctx, system_file, sequence_file, tf);
    }
    if (scan_cmd->parsed()) {
      ctx.command = "scan";
      return run_scan(ctx, system_file, sequence_file, tf_min, tf_max, points, csv_path);
    }
    if (solve_cmd->parsed()) {
      ctx.command = "solve";
      return run_solve(ctx, solve_n, sweep);
    }
    if (search_cmd->parsed()) {
      ctx.command = "search-exact";
      return run_search_exact(ctx, grid, newton_starts, scan_csv);
    }
    if (magnus_cmd->parsed()) {
      ctx.command = "magnus-check";
      return run_magnus_check(ctx, order, trials, magnus_sequence, magnus_tf);
    }
  } catch (const seldec::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const seldec::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
