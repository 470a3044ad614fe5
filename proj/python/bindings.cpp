#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hybridlfc/error.hpp"
#include "hybridlfc/experiments.hpp"
#include "hybridlfc/fuzzy.hpp"
#include "hybridlfc/integrator.hpp"
#include "hybridlfc/oustaloup.hpp"
#include "hybridlfc/pso.hpp"
#include "hybridlfc/scenario.hpp"
#include "hybridlfc/sim.hpp"

namespace py = pybind11;
using namespace hybridlfc;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

ControllerParams make_params(const std::string& controller, const std::vector<double>& values) {
  ControllerParams p = from_vector(parse_controller_tag(controller), values);
  validate(p);
  return p;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["ise"] = m.ise;
  d["isdco"] = m.isdco;
  d["j"] = m.j;
  return d;
}

py::dict table_dict(const Table& t) {
  py::dict d;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid microgrid load-frequency control: simulation, controllers and PSO tuning";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  // fractional operators
  m.def(
      "oustaloup_zpk",
      [](double alpha, double w_b, double w_h, int n) {
        const ZpkFilter f = oustaloup_zpk(alpha, w_b, w_h, n);
        py::dict d;
        d["zeros"] = f.zeros;
        d["poles"] = f.poles;
        d["gain"] = f.gain;
        return d;
      },
      py::arg("alpha"), py::arg("w_b") = 1e-2, py::arg("w_h") = 1e2, py::arg("n") = 2);
  m.def(
      "fractional_response",
      [](double alpha, const std::vector<double>& omega, double w_b, double w_h, int n) {
        const LinearStateSpace ss = fractional_operator(alpha, OustaloupBand{w_b, w_h, n});
        std::vector<std::complex<double>> out;
        out.reserve(omega.size());
        for (double w : omega) out.push_back(ss.freq_response(w));
        return out;
      },
      py::arg("alpha"), py::arg("omega"), py::arg("w_b") = 1e-2, py::arg("w_h") = 1e2,
      py::arg("n") = 2, "Frequency response of the state-space realization at each omega.");

  // fuzzy engine
  m.def("fuzzify", [](double x) {
    const Degrees d = fuzzify(x);
    return std::vector<double>(d.begin(), d.end());
  });
  m.def("flc", &flc, py::arg("error"), py::arg("rate"));

  // chaotic maps
  m.def(
      "henon_sequence",
      [](int count) {
        HenonState s;
        std::vector<double> out(static_cast<std::size_t>(count));
        for (auto& v : out) v = henon_next(s);
        return out;
      },
      py::arg("count"));
  m.def(
      "logistic_sequence",
      [](int count, double x0) {
        LogisticState s{x0};
        std::vector<double> out(static_cast<std::size_t>(count));
        for (auto& v : out) v = logistic_next(s);
        return out;
      },
      py::arg("count"), py::arg("x0") = 0.2027);

  m.def(
      "bs3_step",
      [](const std::function<std::vector<double>(double, std::vector<double>)>& f, double t,
         const std::vector<double>& y, double h) {
        const Rhs rhs = [&f](double tt, std::span<const double> yy, std::span<double> dy) {
          const auto r = f(tt, std::vector<double>(yy.begin(), yy.end()));
          if (r.size() != dy.size()) throw Error(ErrorCode::InvalidArgument, "rhs size mismatch");
          std::copy(r.begin(), r.end(), dy.begin());
        };
        return bs3_step(rhs, t, y, h);
      },
      py::arg("f"), py::arg("t"), py::arg("y"), py::arg("h"));

  m.def("performance_decrease", &performance_decrease, py::arg("nominal"), py::arg("perturbed"));
  m.def("parameter_names", [](const std::string& controller) {
    std::vector<std::string> out;
    for (auto n : parameter_names(parse_controller_tag(controller))) out.emplace_back(n);
    return out;
  });

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&default_scenario))
      .def_static("load", &load_scenario, py::arg("path"))
      .def_static("parse", &parse_scenario, py::arg("text"))
      .def("render", &render_scenario)
      .def_property(
          "seed", [](const Scenario& s) { return s.sim.seed; },
          [](Scenario& s, std::uint64_t v) { s.sim.seed = v; })
      .def_property(
          "realizations", [](const Scenario& s) { return s.sim.realizations; },
          [](Scenario& s, int v) { s.sim.realizations = v; })
      .def_property(
          "t_max", [](const Scenario& s) { return s.sim.t_max; },
          [](Scenario& s, double v) { s.sim.t_max = v; })
      .def_property(
          "step", [](const Scenario& s) { return s.sim.step; },
          [](Scenario& s, double v) { s.sim.step = v; })
      .def_property(
          "particles", [](const Scenario& s) { return s.swarm.particles; },
          [](Scenario& s, int v) { s.swarm.particles = v; })
      .def_property(
          "generations", [](const Scenario& s) { return s.swarm.generations; },
          [](Scenario& s, int v) { s.swarm.generations = v; })
      .def(
          "set_connected",
          [](Scenario& s, const std::string& component, bool on) {
            s.sim.plant.set_connected(parse_component(component), on);
          },
          py::arg("component"), py::arg("on"))
      .def(
          "set_rate_limit",
          [](Scenario& s, const std::string& component, std::optional<double> limit) {
            s.sim.plant.lag(parse_component(component)).rate_limit = limit;
          },
          py::arg("component"), py::arg("limit"))
      .def(
          "controller_values",
          [](const Scenario& s, const std::string& controller) {
            return to_vector(s.controllers.at(parse_controller_tag(controller)));
          },
          py::arg("controller"));

  m.def(
      "simulate",
      [](const Scenario& s, const std::string& controller, const std::vector<double>& values,
         std::optional<std::uint64_t> seed, std::uint64_t realization) {
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run_closed_loop(s.sim, make_params(controller, values), seed.value_or(s.sim.seed),
                              realization);
        }
        py::dict d;
        d["t"] = as_array(r.t);
        d["df"] = as_array(r.df);
        d["u"] = as_array(r.u);
        d["p_wtg"] = as_array(r.p_wtg);
        d["p_stpg"] = as_array(r.p_stpg);
        d["p_fc1"] = as_array(r.p_fc1);
        d["p_fc2"] = as_array(r.p_fc2);
        d["p_deg"] = as_array(r.p_deg);
        d["p_fess"] = as_array(r.p_fess);
        d["p_bess"] = as_array(r.p_bess);
        d["p_uc"] = as_array(r.p_uc);
        d["p_load"] = as_array(r.p_load);
        d["metrics"] = metrics_dict(r.metrics);
        d["diverged"] = r.diverged;
        return d;
      },
      py::arg("scenario"), py::arg("controller"), py::arg("values"), py::arg("seed") = py::none(),
      py::arg("realization") = 0);

  m.def(
      "ensemble_metrics",
      [](const Scenario& s, const std::string& controller, const std::vector<double>& values,
         std::optional<int> realizations, std::optional<std::uint64_t> seed) {
        Metrics r;
        {
          py::gil_scoped_release release;
          r = ensemble_metrics(s.sim, make_params(controller, values),
                               realizations.value_or(s.sim.realizations), seed.value_or(s.sim.seed));
        }
        return metrics_dict(r);
      },
      py::arg("scenario"), py::arg("controller"), py::arg("values"),
      py::arg("realizations") = py::none(), py::arg("seed") = py::none());

  m.def(
      "tune",
      [](const Scenario& s, const std::string& controller, const std::string& rng,
         std::optional<std::uint64_t> seed) {
        TuneOutcome r;
        {
          py::gil_scoped_release release;
          r = tune_controller(s, parse_controller_tag(controller), parse_random_source(rng),
                              seed.value_or(s.sim.seed));
        }
        py::dict d;
        d["values"] = to_vector(r.params);
        d["j_min"] = r.j_min;
        std::vector<double> best, mean;
        for (const auto& row : r.trace) {
          best.push_back(row.best);
          mean.push_back(row.mean);
        }
        d["best_trace"] = best;
        d["mean_trace"] = mean;
        return d;
      },
      py::arg("scenario"), py::arg("controller"), py::arg("rng") = "uniform",
      py::arg("seed") = py::none());

  m.def(
      "robustness_uc",
      [](const Scenario& s, const std::string& controller, const std::vector<double>& values) {
        return table_dict(robustness_uc_table(s, make_params(controller, values)));
      },
      py::arg("scenario"), py::arg("controller"), py::arg("values"));
  m.def(
      "robustness_disconnect",
      [](const Scenario& s, const std::string& controller, const std::vector<double>& values) {
        return table_dict(robustness_disconnect_table(s, make_params(controller, values)));
      },
      py::arg("scenario"), py::arg("controller"), py::arg("values"));

  m.def(
      "run_experiment",
      [](const std::string& command, const std::string& controller, const std::string& rng,
         const std::filesystem::path& out, const std::optional<std::filesystem::path>& scenario,
         std::optional<std::uint64_t> seed, std::optional<int> realizations,
         std::optional<std::filesystem::path> params) {
        ExperimentSpec spec;
        spec.command = parse_command(command);
        spec.controller = parse_controller_tag(controller);
        spec.rng = parse_random_source(rng);
        spec.out = out;
        if (scenario) spec.scenario = *scenario;
        spec.seed = seed;
        spec.realizations = realizations;
        spec.params = std::move(params);
        py::gil_scoped_release release;
        return run_experiment(spec);
      },
      py::arg("command"), py::arg("controller") = "pid", py::arg("rng") = "uniform",
      py::arg("out") = "out", py::arg("scenario") = py::none(), py::arg("seed") = py::none(),
      py::arg("realizations") = py::none(), py::arg("params") = py::none());
}
