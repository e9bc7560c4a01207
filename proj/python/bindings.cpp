// Copyright 2026 The qmarkov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the qmarkov core library.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmarkov/bath.hpp"
#include "qmarkov/core.hpp"
#include "qmarkov/dynamics.hpp"
#include "qmarkov/floquet.hpp"
#include "qmarkov/generators.hpp"
#include "qmarkov/qec.hpp"

namespace py = pybind11;
using namespace qmarkov;

namespace {

DensityMatrix as_state(const Mat& rho) { return DensityMatrix(rho); }

std::vector<Coupling> as_couplings(const std::vector<std::pair<Mat, double>>& cs) {
  std::vector<Coupling> out;
  for (const auto& [op, lambda] : cs) out.push_back({op, lambda});
  return out;
}

py::dict trajectory(const EvolutionResult& r) {
  py::dict d;
  d["times"] = r.times;
  d["states"] = r.states;
  d["max_trace_drift"] = r.max_trace_drift;
  d["min_eigenvalue"] = r.min_eigenvalue;
  d["method"] = r.method;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qmarkov, m) {
  m.doc() = "Markovian open-system dynamics: Davies and Floquet generators, validity checks, QEC recovery";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<StructuralError>(m, "StructuralError", error.ptr());
  py::register_exception<BochnerViolation>(m, "BochnerViolation", error.ptr());
  py::register_exception<DegenerateCodeError>(m, "DegenerateCodeError", error.ptr());

  m.def("pauli_x", &pauli_x);
  m.def("pauli_y", &pauli_y);
  m.def("pauli_z", &pauli_z);
  m.def("sigma_plus", &sigma_plus);
  m.def("sigma_minus", &sigma_minus);
  m.def("gibbs_state", &gibbs_state, py::arg("h"), py::arg("beta"));
  m.def("trace_distance", &trace_distance);
  m.def("choi", &choi, py::arg("superop"), py::arg("dim"));
  m.def("min_eigenvalue", &min_eigenvalue);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def_static("bosonic", &make_bosonic_spectral, py::arg("beta"), py::arg("cutoff"), py::arg("amplitude") = 1.0)
      .def_static("flat", &SpectralModel::flat, py::arg("amplitude"),
                  py::arg("cutoff") = std::numeric_limits<double>::infinity(), py::arg("beta") = 0.0)
      .def_static("tabulated", &SpectralModel::tabulated, py::arg("omega"), py::arg("values"), py::arg("beta"))
      .def("__call__", &SpectralModel::value)
      .def_property_readonly("beta", &SpectralModel::beta)
      .def_property_readonly("cutoff", &SpectralModel::cutoff);
  m.def("check_bochner", &check_bochner, py::arg("model"), py::arg("samples") = 1000, py::arg("extent") = -1.0);
  m.def(
      "kms_violation",
      [](const SpectralModel& g, const std::vector<double>& omegas) { return kms_check(g, omegas).max_relative_violation; },
      py::arg("model"), py::arg("omegas"));

  py::class_<LindbladGenerator>(m, "LindbladGenerator")
      .def_property_readonly("dim", &LindbladGenerator::dim)
      .def_property_readonly("hamiltonian", &LindbladGenerator::hamiltonian)
      .def_property_readonly("superop", [](const LindbladGenerator& g) { return g.superop().matrix(); })
      .def_property_readonly("dissipator", [](const LindbladGenerator& g) { return g.dissipator().matrix(); })
      .def_property_readonly("rates",
                             [](const LindbladGenerator& g) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& t : g.terms()) out.emplace_back(t.frequency, t.rate);
                               return out;
                             })
      .def("apply", &LindbladGenerator::apply)
      .def("choi_min_eigenvalue", &LindbladGenerator::choi_min_eigenvalue, py::arg("t"))
      .def("stationary_state", [](const LindbladGenerator& g) { return stationary_state(g.superop()); });

  m.def(
      "davies_generator",
      [](const Mat& h, const std::vector<std::pair<Mat, double>>& cs, const SpectralModel& g, bool require_kms) {
        DaviesOptions o;
        o.require_kms = require_kms;
        return davies_generator(h, as_couplings(cs), g, o);
      },
      py::arg("h"), py::arg("couplings"), py::arg("model"), py::arg("require_kms") = true);
  m.def("scl_generator", &scl_generator, py::arg("s"), py::arg("a"), py::arg("lam"), py::arg("h") = Mat());
  m.def("covariance_defect", &covariance_defect);

  py::class_<FloquetSystem>(m, "FloquetSystem")
      .def_readonly("period", &FloquetSystem::period)
      .def_readonly("monodromy", &FloquetSystem::monodromy)
      .def_readonly("quasienergies", &FloquetSystem::quasienergies)
      .def_readonly("q_max", &FloquetSystem::q_max);
  m.def(
      "floquet_analyze",
      [](const Mat& h0, double period, const std::vector<std::tuple<Mat, int, double, std::string>>& terms) {
        PeriodicDrive drive(h0, period);
        for (const auto& [op, harmonic, amplitude, shape] : terms) {
          if (shape == "cos") drive.add_cos(op, harmonic, amplitude);
          else if (shape == "sin") drive.add_sin(op, harmonic, amplitude);
          else throw std::invalid_argument("drive shape must be 'cos' or 'sin'");
        }
        return floquet_analyze(drive.sampler(), drive.period());
      },
      py::arg("h0"), py::arg("period"), py::arg("terms"),
      "H(t) = h0 + sum amplitude * f(harmonic * Omega t) * op over (op, harmonic, amplitude, shape) terms.");
  m.def(
      "periodic_generator",
      [](const FloquetSystem& fs, const std::vector<std::pair<Mat, double>>& cs, const SpectralModel& g) {
        return periodic_generator(fs, as_couplings(cs), g);
      },
      py::arg("fs"), py::arg("couplings"), py::arg("model"));
  m.def("floquet_covariance_defect", &floquet_covariance_defect);
  m.def("covariant_propagator", &covariant_propagator, py::arg("fs"), py::arg("gen"), py::arg("t"), py::arg("s"));

  m.def(
      "lindblad_evolve",
      [](const LindbladGenerator& g, const Mat& rho0, const std::vector<double>& times, double rtol) {
        return trajectory(lindblad_evolve(g, as_state(rho0), times, rtol));
      },
      py::arg("gen"), py::arg("rho0"), py::arg("times"), py::arg("rtol") = 1e-9);

  m.def(
      "validity_report",
      [](const std::vector<double>& energies, double gate_time, double drive_frequency, int m_max) {
        const auto r = validity_report(energies, gate_time, drive_frequency, m_max);
        py::dict d;
        d["min_gap"] = r.min_gap;
        d["t_floor"] = r.t_floor;
        d["gate_time"] = r.gate_time;
        d["margolus_levitin"] = r.margolus_levitin;
        d["markovian_ok"] = r.markovian_ok;
        d["no_markov_generator"] = r.no_markov_generator;
        return d;
      },
      py::arg("energies"), py::arg("gate_time"), py::arg("drive_frequency") = 0.0, py::arg("m_max") = 0);

  py::class_<GateSpeedSetup>(m, "GateSpeedSetup")
      .def(py::init<>())
      .def_readwrite("omega0", &GateSpeedSetup::omega0)
      .def_readwrite("bath_spins", &GateSpeedSetup::bath_spins)
      .def_readwrite("spacing", &GateSpeedSetup::spacing)
      .def_readwrite("coupling", &GateSpeedSetup::coupling)
      .def_readwrite("target_rate", &GateSpeedSetup::target_rate)
      .def_readwrite("window", &GateSpeedSetup::window)
      .def_readwrite("time_points", &GateSpeedSetup::time_points)
      .def_readwrite("beta", &GateSpeedSetup::beta);
  m.def(
      "gate_speed_point",
      [](const GateSpeedSetup& s, double m_value) {
        const auto p = gate_speed_point(s, m_value);
        py::dict d;
        d["m"] = p.m;
        d["gate_time"] = p.gate_time;
        d["peak_deviation"] = p.peak_deviation;
        d["final_deviation"] = p.final_deviation;
        d["times"] = p.times;
        d["deviations"] = p.deviations;
        return d;
      },
      py::arg("setup"), py::arg("m"));
  m.def(
      "nonmarkov_scaling_fit",
      [](const std::vector<double>& ms, const std::vector<double>& devs) {
        const auto f = nonmarkov_scaling_fit(ms, devs);
        return py::dict(py::arg("beta") = f.beta, py::arg("prefactor") = f.prefactor,
                        py::arg("r_squared") = f.r_squared, py::arg("non_decaying") = f.non_decaying);
      },
      py::arg("m_values"), py::arg("deviations"));
  m.def("fault_path_bound", &fault_path_bound, py::arg("c"), py::arg("eta"), py::arg("k"), py::arg("v"));

  py::class_<QecScenario>(m, "QecScenario")
      .def_readonly("codewords", &QecScenario::codewords)
      .def_readonly("labels", &QecScenario::labels)
      .def_readonly("ancilla_dim", &QecScenario::ancilla_dim);
  m.def("bit_flip_code", &bit_flip_code);
  m.def(
      "run_recovery",
      [](const QecScenario& code, const Vec& psi, const Mat& rho_a) {
        const auto r = run_recovery(code, psi, as_state(rho_a));
        return std::make_pair(r.rho_out.matrix(), r.fidelity);
      },
      py::arg("code"), py::arg("psi"), py::arg("rho_a"), "Returns (rho_out, fidelity).");
  m.def(
      "fidelity_prediction", [](const QecScenario& code, const Mat& rho_a) { return fidelity_prediction(code, as_state(rho_a)); },
      py::arg("code"), py::arg("rho_a"));
  m.def(
      "ancilla_mixture", [](Eigen::Index dim, double p) { return ancilla_mixture(dim, p).matrix(); }, py::arg("dim"),
      py::arg("p"));
}
