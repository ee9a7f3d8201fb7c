#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rou/analytic.hpp"
#include "rou/error.hpp"
#include "rou/harness.hpp"
#include "rou/simulate.hpp"

namespace py = pybind11;
using namespace rou;

namespace {

BoundarySpec make_boundary(std::optional<double> lower, std::optional<double> upper) { return {lower, upper}; }

// Reports cross the boundary as JSON text and are decoded with Python's json module.
py::object to_python(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_python(const py::object& obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(rou, m) {
    m.doc() = "Reflected Ornstein-Uhlenbeck process: closed forms, simulation and experiments";

    // Messages read "Code [field]: detail".
    py::register_exception<Error>(m, "RouError", PyExc_ValueError);

    py::class_<OUParams>(m, "OUParams")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("gamma"), py::arg("sigma"))
        .def_property_readonly("alpha", &OUParams::alpha)
        .def_property_readonly("gamma", &OUParams::gamma)
        .def_property_readonly("sigma", &OUParams::sigma)
        .def_property_readonly("mean", &OUParams::mean)
        .def_property_readonly("sd", &OUParams::sd)
        .def("__repr__", [](const OUParams& p) {
            return "OUParams(alpha=" + std::to_string(p.alpha()) + ", gamma=" + std::to_string(p.gamma()) +
                   ", sigma=" + std::to_string(p.sigma()) + ")";
        });

    py::class_<BoundarySpec>(m, "BoundarySpec")
        .def(py::init(&make_boundary), py::arg("lower") = py::none(), py::arg("upper") = py::none())
        .def_property_readonly("lower", &BoundarySpec::lower)
        .def_property_readonly("upper", &BoundarySpec::upper)
        .def("is_doubly", &BoundarySpec::is_doubly)
        .def("contains", &BoundarySpec::contains);

    m.def("stationary_mean", &stationary_mean, py::arg("params"), py::arg("boundary"));
    m.def("boundary_rate", &boundary_rate, py::arg("params"), py::arg("boundary"));
    m.def("doubly_loss_rate", [](const OUParams& p, double d) { return doubly_loss_rate(p, d); },
          py::arg("params"), py::arg("d"));
    m.def("asymptotic_variance", [](const OUParams& p, const BoundarySpec& b) { return asymptotic_variance(p, b); },
          py::arg("params"), py::arg("boundary"));
    m.def("h_prime", &h_prime, py::arg("params"), py::arg("boundary"), py::arg("x"));
    m.def("generator_residual", &generator_residual, py::arg("params"), py::arg("boundary"), py::arg("x"),
          py::arg("fd_step"));
    m.def("stationary_density", [](const OUParams& p, const BoundarySpec& b, double y) {
        return StationaryLaw(p, b).density(y);
    }, py::arg("params"), py::arg("boundary"), py::arg("y"));

    m.def("simulate_path",
          [](const OUParams& p, const BoundarySpec& b, double x0, double dt, double horizon, std::uint64_t seed) {
              SimConfig c{p, b};
              c.x0 = x0;
              c.dt = dt;
              c.horizon = horizon;
              c.seed = seed;
              const ReflectedPath path = simulate_path(c);
              py::dict out;
              out["dt"] = path.dt;
              out["horizon"] = path.horizon;
              out["seed"] = path.seed;
              out["t"] = path.times;
              out["y"] = path.y;
              out["l"] = path.l;
              out["u"] = path.u;
              return out;
          },
          py::arg("params"), py::arg("boundary"), py::arg("x0") = 0.0, py::arg("dt") = 1e-3,
          py::arg("horizon") = 1.0, py::arg("seed") = 0);

    m.def("batch_simulate",
          [](const OUParams& p, const BoundarySpec& b, double x0, double dt, double horizon, std::size_t n_paths,
             std::uint64_t master_seed, unsigned workers) {
              SimConfig c{p, b};
              c.x0 = x0;
              c.dt = dt;
              c.horizon = horizon;
              std::vector<TerminalSummary> rows;
              {
                  py::gil_scoped_release release;
                  rows = batch_simulate(c, n_paths, master_seed, {workers});
              }
              py::list out;
              for (const auto& r : rows) out.append(py::make_tuple(r.y_T, r.l_T, r.u_T));
              return out;
          },
          py::arg("params"), py::arg("boundary"), py::arg("x0"), py::arg("dt"), py::arg("horizon"),
          py::arg("n_paths"), py::arg("master_seed"), py::arg("workers") = 0);

    m.def("default_config", [](const std::string& kind) { return to_python(config_to_json(default_config(parse_kind(kind)))); },
          py::arg("kind"));
    m.def("run_experiment",
          [](const py::object& config) {
              const ExperimentConfig c = config_from_json(from_python(config));
              ExperimentReport report;
              {
                  py::gil_scoped_release release;
                  report = run_experiment(c);
              }
              return to_python(report_to_json(report));
          },
          py::arg("config"), "Run an experiment from a config dict; returns the report as a dict.");
}
