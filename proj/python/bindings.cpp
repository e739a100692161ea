#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seldec/errors.hpp"
#include "seldec/evaluator.hpp"
#include "seldec/magnus.hpp"
#include "seldec/matrix.hpp"
#include "seldec/sequence.hpp"
#include "seldec/solver.hpp"
#include "seldec/system.hpp"

namespace py = pybind11;

namespace {

py::dict residuals_dict(const seldec::ConstraintResiduals& r) {
  py::dict d;
  d["sum_defect"] = r.sum_defect;
  d["parity_defect"] = r.parity_defect;
  d["S"] = r.second_order;
  d["C1"] = r.third_c1;
  d["C2"] = r.third_c2;
  d["C1_plus_C2"] = r.third_cross;
  return d;
}

std::string branch_name(seldec::Branch b) { return std::string(seldec::to_string(b)); }

}  // namespace

PYBIND11_MODULE(_seldec, m) {
  m.doc() = "Selective dynamical decoupling: sequence design and exact verification";

  auto base = py::register_exception<seldec::Error>(m, "SeldecError", PyExc_RuntimeError);
  py::register_exception<seldec::InputError>(m, "InputError", base.ptr());
  py::register_exception<seldec::NumericalError>(m, "NumericalError", base.ptr());

  // matrix-core
  m.def("commutator", &seldec::commutator);
  m.def("exp_hermitian_generator", &seldec::exp_hermitian_generator, py::arg("h"), py::arg("s"),
        py::arg("tol") = seldec::kDefaultTolerance, "e^{-i s H} for Hermitian H");
  m.def("principal_log_unitary", &seldec::principal_log_unitary, py::arg("u"),
        py::arg("branch_margin") = seldec::kBranchMargin, py::arg("tol") = seldec::kDefaultTolerance);
  m.def("frobenius_norm", &seldec::frobenius_norm);
  m.def("spectral_norm", &seldec::spectral_norm);
  m.def("random_hermitian", &seldec::random_hermitian, py::arg("dim"), py::arg("seed"),
        py::arg("stream") = 0);

  // system-model
  py::class_<seldec::LevelSystem>(m, "LevelSystem")
      .def(py::init<>())
      .def(py::init<std::size_t, std::vector<std::size_t>, std::vector<std::string>>(),
           py::arg("dim"), py::arg("flip_set"), py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("dim", &seldec::LevelSystem::dim)
      .def_property_readonly("labels", &seldec::LevelSystem::labels)
      .def_property_readonly("flip_set", &seldec::LevelSystem::flip_set);

  py::class_<seldec::PulsePlan>(m, "PulsePlan")
      .def_readonly("system", &seldec::PulsePlan::system)
      .def_readonly("pulse", &seldec::PulsePlan::pulse);

  m.def("pulse_operator", &seldec::pulse_operator);
  m.def("rotated_hamiltonian", &seldec::rotated_hamiltonian);
  m.def("target_hamiltonian", &seldec::target_hamiltonian);
  m.def("coupling_decomposition", [](const seldec::ComplexMatrix& h, const seldec::PulsePlan& plan) {
    auto parts = seldec::coupling_decomposition(h, plan);
    return py::make_tuple(parts.target, parts.unwanted);
  });

  // pulse-sequence
  py::class_<seldec::PulseSequence>(m, "PulseSequence")
      .def(py::init<std::vector<double>>(), py::arg("deltas"))
      .def_property_readonly("n", &seldec::PulseSequence::pulse_count)
      .def_property_readonly("deltas", &seldec::PulseSequence::deltas)
      .def("__repr__", [](const seldec::PulseSequence& s) {
        return "PulseSequence(" + py::repr(py::cast(s.deltas())).cast<std::string>() + ")";
      });

  m.def("validate", [](const std::vector<double>& deltas, bool require_parity) {
    const auto r = seldec::validate(std::span<const double>(deltas), require_parity);
    py::dict d;
    d["sum_residual"] = r.sum_residual;
    d["even_residual"] = r.even_residual;
    d["odd_residual"] = r.odd_residual;
    d["passed"] = r.passed;
    return d;
  }, py::arg("deltas"), py::arg("require_parity") = true);
  m.def("uhrig", &seldec::uhrig, py::arg("n"));
  m.def("exact_n2", &seldec::exact_n2);
  m.def("family_n4", [](double delta1, const std::string& branch) {
    return seldec::family_n4(delta1, seldec::parse_branch(branch));
  }, py::arg("delta1"), py::arg("branch") = "lower");
  m.def("family_n4_interval", [] {
    const auto i = seldec::family_n4_interval();
    return py::make_tuple(i.lower, i.upper);
  });
  m.def("pulse_times", &seldec::pulse_times, py::arg("seq"), py::arg("total_time"));

  // magnus-engine
  m.def("second_order_coefficient",
        py::overload_cast<const seldec::PulseSequence&>(&seldec::second_order_coefficient));
  m.def("third_order_coefficients", [](const seldec::PulseSequence& seq) {
    const auto c = seldec::third_order_coefficients(seq);
    return py::make_tuple(c.c1, c.c2);
  });
  m.attr("THIRD_ORDER_NORMALIZATION") = seldec::kThirdOrderNormalization;
  m.def("closed_form_vs_oracle", [](const seldec::PulseSequence& seq, const seldec::PulsePlan& plan,
                                    double total_time, int trials, std::uint64_t seed) {
    const auto c = seldec::closed_form_vs_oracle(seq, plan, total_time, trials, seed);
    py::dict d;
    d["max_first_order_deviation"] = c.max_first_order_deviation;
    d["max_second_order_deviation"] = c.max_second_order_deviation;
    if (c.has_third_order) {
      d["fitted_alpha"] = c.fitted_alpha;
      d["max_third_order_deviation"] = c.max_third_order_deviation;
      d["max_third_order_cross_block"] = c.max_third_order_cross_block;
    }
    return d;
  }, py::arg("seq"), py::arg("plan"), py::arg("total_time") = 1.0, py::arg("trials") = 100,
     py::arg("seed") = 0);

  // sequence-solver
  m.def("residuals", [](const seldec::PulseSequence& seq) { return residuals_dict(seldec::residuals(seq)); });
  m.def("solve_n2", &seldec::solve_n2);
  m.def("sweep_family_n4", [](int points) {
    py::list rows;
    for (const auto& row : seldec::sweep_family_n4(points).rows) {
      py::dict d;
      d["delta1"] = row.delta1;
      d["branch"] = branch_name(row.branch);
      d["deltas"] = row.sequence.deltas();
      d["residuals"] = residuals_dict(row.residuals);
      rows.append(d);
    }
    return rows;
  }, py::arg("points"));
  m.def("search_full_third_order", [](int grid, double refine_tol) {
    const auto s = seldec::search_full_third_order(grid, refine_tol);
    py::list candidates;
    for (const auto& c : s.candidates) candidates.append(py::make_tuple(c.delta1, branch_name(c.branch), c.sequence.deltas()));
    py::dict d;
    d["candidates"] = candidates;
    d["min_abs_c1"] = s.min_abs_c1;
    d["argmin_delta1"] = s.argmin_delta1;
    d["argmin_branch"] = branch_name(s.argmin_branch);
    return d;
  }, py::arg("grid") = 1000, py::arg("refine_tol") = 1e-10);

  // evolution-evaluator
  m.def("exact_propagator", &seldec::exact_propagator);
  m.def("effective_hamiltonian", &seldec::effective_hamiltonian);
  m.def("residual_metrics", [](const seldec::ComplexMatrix& heff, const seldec::ComplexMatrix& h,
                               const seldec::PulsePlan& plan) {
    const auto r = seldec::residual_metrics(heff, h, plan);
    py::dict d;
    d["unwanted_residual"] = r.unwanted_residual;
    d["wanted_deviation"] = r.wanted_deviation;
    d["preserved_coupling_deviation"] =
        r.preserved_coupling_deviation ? py::cast(*r.preserved_coupling_deviation) : py::none();
    return d;
  });
  m.def("scaling_study", [](const seldec::ComplexMatrix& h, const seldec::PulsePlan& plan,
                            const seldec::PulseSequence& seq, double t_min, double t_max, int points) {
    const auto f = seldec::scaling_study(h, plan, seq, t_min, t_max, points);
    py::list grid;
    for (const auto& p : f.grid) grid.append(py::make_tuple(p.total_time, p.unwanted_residual, p.wanted_deviation));
    py::dict d;
    d["grid"] = grid;
    d["slope_unwanted"] = f.slope_unwanted;
    d["slope_wanted"] = f.slope_wanted;
    d["excluded"] = f.noise_floor_points_excluded;
    return d;
  }, py::arg("h"), py::arg("plan"), py::arg("seq"), py::arg("t_min") = 1e-3, py::arg("t_max") = 1e-1,
     py::arg("points") = 9);
}
