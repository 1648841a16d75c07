#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "quadsim/config.hpp"
#include "quadsim/errors.hpp"
#include "quadsim/experiment.hpp"

namespace py = pybind11;
using namespace quadsim;

namespace {

py::array_t<double> trace_array(const Trace& trace) {
  py::array_t<double> out({trace.rows.size(), std::size_t{26}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& r = trace.rows[i];
    std::size_t j = 0;
    a(i, j++) = r.t;
    for (double v : r.state.to_vector()) a(i, j++) = v;
    for (double v : {r.control.U1, r.control.U2, r.control.U3, r.control.U4}) a(i, j++) = v;
    for (double v : {r.speeds.w1, r.speeds.w2, r.speeds.w3, r.speeds.w4}) a(i, j++) = v;
    for (double v : r.noise) a(i, j++) = v;
    a(i, j) = r.clamped ? 1.0 : 0.0;
  }
  return out;
}

StepChannel channel_of(const std::vector<double>& t, const std::vector<double>& y, double initial,
                       double reference) {
  return {t, y, initial, reference};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quadrotor simulation core";

  auto base = py::register_exception<Error>(m, "QuadsimError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<BandError>(m, "BandError", base.ptr());
  py::register_exception<TiltError>(m, "TiltError", base.ptr());

  py::class_<QuadrotorParams>(m, "QuadrotorParams")
      .def(py::init<>())
      .def_readwrite("mass", &QuadrotorParams::mass)
      .def_readwrite("gravity", &QuadrotorParams::gravity)
      .def_readwrite("arm_length", &QuadrotorParams::arm_length)
      .def_readwrite("thrust_coeff", &QuadrotorParams::thrust_coeff)
      .def_readwrite("drag_coeff", &QuadrotorParams::drag_coeff)
      .def_readwrite("Ix", &QuadrotorParams::Ix)
      .def_readwrite("Iy", &QuadrotorParams::Iy)
      .def_readwrite("Iz", &QuadrotorParams::Iz)
      .def_readwrite("rotor_inertia", &QuadrotorParams::rotor_inertia)
      .def_readwrite("max_rotor_speed", &QuadrotorParams::max_rotor_speed)
      .def_readwrite("max_torque", &QuadrotorParams::max_torque)
      .def("validate", &QuadrotorParams::validate);

  m.def("rotation_matrix", &rotation_matrix, py::arg("phi"), py::arg("theta"), py::arg("psi"));
  m.def("euler_rate_matrix", &euler_rate_matrix, py::arg("phi"), py::arg("theta"));

  m.def(
      "mix",
      [](std::array<double, 4> w, const QuadrotorParams& p) {
        const ControlVector u = mix({w[0], w[1], w[2], w[3]}, p);
        return std::array<double, 4>{u.U1, u.U2, u.U3, u.U4};
      },
      py::arg("speeds"), py::arg("params") = QuadrotorParams{});
  m.def(
      "unmix",
      [](std::array<double, 4> u, const QuadrotorParams& p) {
        const UnmixResult r = unmix({u[0], u[1], u[2], u[3]}, p);
        return py::make_tuple(
            std::array<double, 4>{r.speeds.w1, r.speeds.w2, r.speeds.w3, r.speeds.w4}, r.clamped);
      },
      py::arg("control"), py::arg("params") = QuadrotorParams{});
  m.def(
      "state_derivative",
      [](std::array<double, 12> s, std::array<double, 4> u, double w_r, const QuadrotorParams& p) {
        return state_derivative(RigidBodyState::from_vector(s), {u[0], u[1], u[2], u[3]}, w_r, p)
            .to_vector();
      },
      py::arg("state"), py::arg("control"), py::arg("w_r") = 0.0,
      py::arg("params") = QuadrotorParams{});

  m.def(
      "noise_samples",
      [](const std::string& color, std::size_t n, double power, double sample_time,
         std::uint64_t seed) {
        NoiseStream s({parse_noise_color(color), power, sample_time, seed});
        py::array_t<double> out(n);
        auto a = out.mutable_unchecked<1>();
        for (std::size_t i = 0; i < n; ++i) a(i) = s.next_sample();
        return out;
      },
      py::arg("color"), py::arg("n"), py::arg("power") = 0.01, py::arg("sample_time") = 0.1,
      py::arg("seed") = 0);
  m.def(
      "psd_slope",
      [](const std::vector<double>& x, double ts, double lo, double hi) {
        return psd_slope(x, ts, lo, hi);
      },
      py::arg("samples"), py::arg("sample_time"), py::arg("f_lo") = kSlopeBandLo,
      py::arg("f_hi") = kSlopeBandHi);

  m.def(
      "rise_time",
      [](const std::vector<double>& t, const std::vector<double>& y, double initial, double ref) {
        return rise_time(channel_of(t, y, initial, ref));
      },
      py::arg("t"), py::arg("y"), py::arg("initial"), py::arg("reference"));
  m.def(
      "overshoot",
      [](const std::vector<double>& t, const std::vector<double>& y, double initial, double ref) {
        return overshoot(channel_of(t, y, initial, ref));
      },
      py::arg("t"), py::arg("y"), py::arg("initial"), py::arg("reference"));
  m.def(
      "settling_time",
      [](const std::vector<double>& t, const std::vector<double>& y, double initial, double ref,
         double band) { return settling_time(channel_of(t, y, initial, ref), band); },
      py::arg("t"), py::arg("y"), py::arg("initial"), py::arg("reference"),
      py::arg("band_pct") = 2.0);

  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init<>())
      .def_static("parse", &parse_config, py::arg("text"), py::arg("source") = "<config>")
      .def_static("load", [](const std::string& path) { return load_config(path); })
      .def("validate", &ExperimentConfig::validate)
      .def("resolved", &ExperimentConfig::resolved)
      .def_readwrite("quadrotor", &ExperimentConfig::quadrotor)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir);

  m.attr("TRACE_COLUMNS") = std::string(kTraceHeader);

  m.def(
      "simulate",
      [](const ExperimentConfig& cfg, const std::string& controller, const std::string& noise,
         std::uint64_t seed) {
        const RunResult r =
            run_single(cfg, parse_controller_kind(controller), parse_noise_choice(noise), seed);
        py::dict metrics;
        if (r.metrics) {
          for (const auto& cm : *r.metrics) {
            if (!cm.metrics) {
              metrics[py::str(std::string(to_string(cm.channel)))] = py::none();
              continue;
            }
            py::dict d;
            d["rise_time"] = cm.metrics->rise_time;
            d["overshoot_pct"] = cm.metrics->overshoot_pct;
            d["settling_time"] = cm.metrics->settling_time;
            d["band_pct"] = cm.metrics->band_pct;
            metrics[py::str(std::string(to_string(cm.channel)))] = d;
          }
        }
        py::dict out;
        out["trace"] = trace_array(r.trace);
        out["metrics"] = metrics;
        out["error"] = r.ok() ? py::object(py::none()) : py::object(py::str(r.error));
        return out;
      },
      py::arg("config"), py::arg("controller") = "backstepping", py::arg("noise") = "white",
      py::arg("seed") = 1);

  m.def(
      "sweep_summary",
      [](const ExperimentConfig& cfg) {
        std::vector<CompareResult> results;
        for (NoiseColor c : kAllColors) results.push_back(compare(cfg, c));
        const SweepSummary s = summarize(results);
        std::ostringstream csv;
        write_summary_csv(csv, s);
        return py::make_tuple(s.ordering_fraction(), s.settling_ok(), csv.str());
      },
      py::arg("config"));
}
