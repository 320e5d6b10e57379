#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qweber/diagnostics.hpp"
#include "qweber/harness.hpp"
#include "qweber/oracle.hpp"
#include "qweber/solver.hpp"

namespace py = pybind11;
using namespace qweber;

namespace {

StartRule start_from_object(const py::object& obj) {
    if (obj.is_none()) return StartCentroid{};
    if (py::isinstance<py::str>(obj)) {
        const std::string text = obj.cast<std::string>();
        if (text == "centroid") return StartCentroid{};
        throw py::value_error("start string must be 'centroid'");
    }
    if (py::isinstance<py::int_>(obj)) return obj.cast<int>();
    return obj.cast<Point>();
}

py::object start_to_object(const StartRule& start) {
    if (std::holds_alternative<StartCentroid>(start)) return py::str("centroid");
    if (const int* k = std::get_if<int>(&start)) return py::int_(*k);
    return py::cast(std::get<Point>(start));
}

}  // namespace

PYBIND11_MODULE(_qweber, m) {
    m.doc() = "q-th power Weber location solver with singularity handling";

    py::register_exception<SingularEvaluationError>(m, "SingularEvaluationError");
    py::register_exception<AmbiguousCoincidenceError>(m, "AmbiguousCoincidenceError");
    py::register_exception<BacktrackCapError>(m, "BacktrackCapError");

    py::class_<WeberInstance>(m, "WeberInstance")
        .def(py::init<std::vector<Point>, std::vector<double>, double>(),
             py::arg("points"), py::arg("multiplicities"), py::arg("power"))
        .def_property_readonly("points", &WeberInstance::points)
        .def_property_readonly("multiplicities", &WeberInstance::multiplicities)
        .def_property_readonly("power", &WeberInstance::power)
        .def_property_readonly("scale", &WeberInstance::scale)
        .def("eta", &WeberInstance::eta, py::arg("k"))
        .def("weighted_centroid", &WeberInstance::weighted_centroid)
        .def("__len__", &WeberInstance::size)
        .def_property_readonly("dimension", &WeberInstance::dimension);

    m.def(
        "merge_duplicates",
        [](const std::vector<Point>& points, double power, py::object multiplicities,
           double merge_eps) {
            if (multiplicities.is_none())
                return merge_duplicates(points, power, merge_eps);
            return merge_duplicates(points, multiplicities.cast<std::vector<double>>(),
                                    power, merge_eps);
        },
        py::arg("points"), py::arg("power") = 1.0, py::arg("multiplicities") = py::none(),
        py::arg("merge_eps") = 1e-12);

    m.def("cost", &cost, py::arg("instance"), py::arg("y"));
    m.def("gradient", &gradient, py::arg("instance"), py::arg("y"),
          py::arg("coincidence_eps") = 1e-12);
    m.def("coincidence_index", &coincidence_index, py::arg("instance"), py::arg("y"),
          py::arg("coincidence_eps") = 1e-12);
    m.def("desingularity_subgradient", &desingularity_subgradient, py::arg("instance"),
          py::arg("k"));

    py::class_<MinimumCertificate>(m, "MinimumCertificate")
        .def_readonly("coincident_index", &MinimumCertificate::coincident_index)
        .def_readonly("is_minimum", &MinimumCertificate::is_minimum)
        .def_readonly("subgradient", &MinimumCertificate::subgradient)
        .def_readonly("residual", &MinimumCertificate::residual);

    m.def("subgradient_certificate", &subgradient_certificate, py::arg("instance"),
          py::arg("k"), py::arg("grad_eps") = 1e-9);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("tol", &SolverConfig::tol)
        .def_readwrite("rho", &SolverConfig::rho)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("max_backtracks", &SolverConfig::max_backtracks)
        .def_readwrite("coincidence_eps", &SolverConfig::coincidence_eps)
        .def_readwrite("grad_eps", &SolverConfig::grad_eps)
        .def_property(
            "start", [](const SolverConfig& c) { return start_to_object(c.start); },
            [](SolverConfig& c, const py::object& obj) {
                c.start = start_from_object(obj);
            });

    py::enum_<Event>(m, "Event")
        .value("T1", Event::T1)
        .value("ESCAPE", Event::Escape)
        .value("L1_COINCIDENCE", Event::L1Coincidence)
        .value("CERTIFIED_MINIMUM", Event::CertifiedMinimum)
        .value("STOPPED", Event::Stopped);

    py::enum_<Status>(m, "Status")
        .value("CONVERGED", Status::Converged)
        .value("CERTIFIED_AT_DATA_POINT", Status::CertifiedAtDataPoint)
        .value("STUCK_AT_DATA_POINT", Status::StuckAtDataPoint)
        .value("ITERATION_CAP", Status::IterationCap);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iterate", &IterationRecord::iterate)
        .def_readonly("cost_value", &IterationRecord::cost_value)
        .def_readonly("event", &IterationRecord::event)
        .def_readonly("backtracks", &IterationRecord::backtracks)
        .def_readonly("lambda_star", &IterationRecord::lambda_star)
        .def_readonly("coincident_index", &IterationRecord::coincident_index);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("minimizer", &SolveResult::minimizer)
        .def_readonly("cost_at_min", &SolveResult::cost_at_min)
        .def_readonly("status", &SolveResult::status)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("escape_events", &SolveResult::escape_events)
        .def_readonly("records", &SolveResult::records);

    m.def("t1_step", &t1_step, py::arg("instance"), py::arg("y"));

    py::class_<EscapeResult>(m, "EscapeResult")
        .def_readonly("point", &EscapeResult::point)
        .def_readonly("lambda_star", &EscapeResult::lambda_star)
        .def_readonly("trials", &EscapeResult::trials);

    m.def("t2_escape", &t2_escape, py::arg("instance"), py::arg("k"),
          py::arg("config") = SolverConfig{});
    m.def("l1_coincidence_step", &l1_coincidence_step, py::arg("instance"), py::arg("k"));
    m.def("solve_qpwaws", &solve_qpwaws, py::arg("instance"),
          py::arg("config") = SolverConfig{});
    m.def("solve_qpwa", &solve_qpwa, py::arg("instance"),
          py::arg("config") = SolverConfig{});

    m.def("oracle_minimize", &oracle_minimize, py::arg("instance"), py::arg("precision"));
    m.def("finite_difference_gradient", &finite_difference_gradient,
          py::arg("instance"), py::arg("y"), py::arg("h"));

    m.def("rate_estimate", &rate_estimate, py::arg("records"));
    m.def("rate_sequence", &rate_sequence, py::arg("records"));
    m.def("theoretical_rate_at_data_point", &theoretical_rate_at_data_point,
          py::arg("instance"), py::arg("k"), py::arg("grad_eps") = 1e-9);
    m.def("descent_violation_index", &descent_violation_index, py::arg("records"),
          py::arg("rel_tol") = 1e-13);

    py::class_<SeriesMatrix>(m, "SeriesMatrix")
        .def(py::init([](std::vector<Point> rows) { return SeriesMatrix{std::move(rows)}; }),
             py::arg("rows"))
        .def_readonly("rows", &SeriesMatrix::rows)
        .def_property_readonly("days", &SeriesMatrix::days)
        .def_property_readonly("dimension", &SeriesMatrix::dimension);

    m.def("load_series_csv", &load_series_csv, py::arg("path"),
          py::arg("require_positive") = true);
    m.def("synth_generate", &synth_generate, py::arg("seed"), py::arg("days"),
          py::arg("dimension"), py::arg("volatility") = 0.02);
    m.def("rolling_windows", &rolling_windows, py::arg("series"), py::arg("window"),
          py::arg("power"), py::arg("merge_eps") = 1e-12);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("q", &SweepCell::q)
        .def_readonly("m", &SweepCell::m)
        .def_readonly("escape_iters_mean", &SweepCell::escape_iters_mean)
        .def_readonly("escape_iters_std", &SweepCell::escape_iters_std)
        .def_readonly("solve_iters_mean", &SweepCell::solve_iters_mean)
        .def_readonly("solve_iters_std", &SweepCell::solve_iters_std)
        .def_readonly("rate_mean", &SweepCell::rate_mean)
        .def_readonly("rate_std", &SweepCell::rate_std)
        .def_readonly("time_mean_seconds", &SweepCell::time_mean_seconds)
        .def_readonly("max_rel_diff_vs_qpwa", &SweepCell::max_rel_diff_vs_qpwa)
        .def_readonly("windows_run", &SweepCell::windows_run);

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("cells", &SweepReport::cells);

    m.def(
        "run_sweep",
        [](const SeriesMatrix& series, const std::vector<double>& q_values,
           const std::vector<int>& m_values, const SolverConfig& config,
           const py::object& start) {
            return run_sweep(series, q_values, m_values, config,
                             start_from_object(start));
        },
        py::arg("series"), py::arg("q_values"), py::arg("m_values"),
        py::arg("config") = SolverConfig{}, py::arg("start") = py::int_(0));
    m.def("sweep_report_to_json", &sweep_report_to_json, py::arg("report"));
}
