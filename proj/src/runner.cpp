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

#include <yaml-cpp/yaml.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qmarkov/bath.hpp"
#include "qmarkov/dynamics.hpp"
#include "qmarkov/floquet.hpp"
#include "qmarkov/generators.hpp"
#include "qmarkov/qec.hpp"
#include "qmarkov/scenario.hpp"

namespace qmarkov {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

json yaml_to_json(const YAML::Node& n) {
  if (n.IsMap()) {
    json j = json::object();
    for (const auto& kv : n) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
    return j;
  }
  if (n.IsSequence()) {
    json j = json::array();
    for (const auto& e : n) j.push_back(yaml_to_json(e));
    return j;
  }
  if (n.IsScalar()) {
    const auto& s = n.Scalar();
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    if (s == "true") return true;
    if (s == "false") return false;
    return s;
  }
  return nullptr;
}

json matrix_json(const Mat& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return json{{"re", re}, {"im", im}};
}

json tolerances_json() {
  const Tolerances& t = Tolerances::defaults();
  return json{{"hermitian", t.hermitian},   {"unitary", t.unitary}, {"trace", t.trace},
              {"positivity", t.positivity}, {"cluster", t.cluster}, {"bochner", t.bochner},
              {"markov_factor", t.markov_factor}};
}

struct Checks {
  json list = json::array();
  bool all = true;

  void at_most(const std::string& name, double value, double threshold) { add(name, value, "<=", threshold, value <= threshold); }
  void at_least(const std::string& name, double value, double threshold) { add(name, value, ">=", threshold, value >= threshold); }
  void flag(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, "==", 1.0, ok); }

  void add(const std::string& name, double value, const std::string& op, double threshold, bool pass) {
    list.push_back(json{{"name", name}, {"value", jnum(value)}, {"op", op}, {"threshold", jnum(threshold)}, {"pass", pass}});
    all = all && pass;
  }
};

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// Runs f(i) for i in [0, n) on up to `jobs` threads; results go to
// caller-owned slots so output order never depends on scheduling.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SpectralModel make_model(const BathSpec& b) {
  if (b.kind == "bosonic_cubic") return make_bosonic_spectral(b.beta, b.cutoff, b.amplitude);
  if (b.kind == "flat") return SpectralModel::flat(b.amplitude, b.cutoff, b.beta);
  return SpectralModel::tabulated(b.omega, b.values, b.beta);
}

std::vector<Coupling> make_couplings(const Scenario& s) {
  std::vector<Coupling> out;
  for (const auto& c : s.couplings) out.push_back({c.op, c.lambda});
  return out;
}

PeriodicDrive make_drive(const SystemSpec& sys) {
  PeriodicDrive d(sys.hamiltonian, sys.period);
  for (const auto& t : sys.drive) {
    if (t.shape == "cos") d.add_cos(t.op, t.harmonic, t.amplitude);
    else if (t.shape == "sin") d.add_sin(t.op, t.harmonic, t.amplitude);
    else {
      std::vector<double> samples = t.samples;
      for (auto& x : samples) x *= t.amplitude;
      d.add_table(t.op, samples);
    }
  }
  return d;
}

std::vector<double> positive_samples(const SpectralModel& m, int n) {
  const double top = m.has_cutoff() ? m.cutoff() : 10.0;
  std::vector<double> xs;
  for (int i = 1; i <= n; ++i) xs.push_back(top * i / (n + 1));
  return xs;
}

json rates_json(const LindbladGenerator& gen, Csv& csv) {
  json rates = json::array();
  for (const auto& t : gen.terms()) {
    rates.push_back(json{{"frequency", t.frequency}, {"rate", t.rate}});
    csv.row({num(t.frequency), num(t.rate)});
  }
  return rates;
}

void add_choi_checks(Checks& checks, const LindbladGenerator& gen) {
  for (double t : {0.1, 1.0, 10.0}) {
    char label[40];
    std::snprintf(label, sizeof label, "choi_min_eigenvalue_t%g", t);
    checks.at_least(label, gen.choi_min_eigenvalue(t), -1e-8);
  }
}

struct Context {
  Context(const Scenario& sc, const RunOptions& o, std::uint64_t sd) : s(sc), opts(o), seed(sd) {}

  const Scenario& s;
  const RunOptions& opts;
  std::uint64_t seed;
  std::string stage = "cli";
  json results = json::object();
  json headline = json::object();
  Checks checks;
  std::vector<std::pair<std::string, std::string>> csvs;  // suffix, content
};

void run_generator(Context& c) {
  const Scenario& s = c.s;
  const Mat& h = s.system.hamiltonian;
  LindbladGenerator gen;
  std::optional<SpectralModel> model;
  if (s.bath) {
    c.stage = "bath";
    model = make_model(*s.bath);
    check_bochner(*model);
    if (std::isfinite(model->beta()) && model->beta() > 0.0) {
      const auto kms = kms_check(*model, positive_samples(*model, 100));
      c.checks.flag("kms", kms.pass);
      c.results["kms_max_relative_violation"] = kms.max_relative_violation;
    }
  }
  c.stage = "generators";
  if (s.generator.type == "scl") {
    if (s.couplings.size() != 1) throw Error("the scl generator takes exactly one coupling");
    gen = scl_generator(s.couplings[0].op, s.generator.scl_amplitude, s.couplings[0].lambda, h);
  } else {
    DaviesOptions o;
    o.require_kms = s.generator.require_kms;
    gen = davies_generator(h, make_couplings(s), *model, o);
  }
  const double cov = covariance_defect(gen, h);
  if (s.generator.type == "davies") c.checks.at_most("covariance_defect", cov, 1e-9);
  c.results["covariance_defect"] = cov;
  if (s.generator.type == "davies" && model && model->beta() > 0.0) {
    const Mat gibbs = gibbs_state(h, model->beta());
    const double residual = gen.apply(gibbs).norm();
    c.checks.at_most("gibbs_residual", residual, 1e-8);
    c.headline["gibbs_residual"] = residual;
  }
  add_choi_checks(c.checks, gen);
  Csv rates({"frequency", "rate"});
  c.results["jumps"] = rates_json(gen, rates);
  c.results["stationary_state"] = matrix_json(stationary_state(gen.superop()));
  c.headline["jump_count"] = gen.terms().size();
  c.headline["covariance_defect"] = cov;
  Csv superop({"row", "col", "re", "im"});
  const Mat& l = gen.superop().matrix();
  for (Eigen::Index j = 0; j < l.cols(); ++j)
    for (Eigen::Index i = 0; i < l.rows(); ++i)
      if (l(i, j) != cplx(0.0)) superop.row({std::to_string(i), std::to_string(j), num(l(i, j).real()), num(l(i, j).imag())});
  c.csvs.emplace_back("rates", rates.str());
  c.csvs.emplace_back("superop", superop.str());
}

std::pair<FloquetSystem, LindbladGenerator> build_floquet(Context& c) {
  const Scenario& s = c.s;
  c.stage = "bath";
  const SpectralModel model = make_model(*s.bath);
  check_bochner(model);
  c.stage = "floquet";
  const PeriodicDrive drive = make_drive(s.system);
  FloquetSystem fs = floquet_analyze(drive.sampler(), drive.period());
  LindbladGenerator gen = periodic_generator(fs, make_couplings(s), model);
  return {std::move(fs), std::move(gen)};
}

void run_floquet(Context& c) {
  auto [fs, gen] = build_floquet(c);
  c.checks.flag("propagator_converged", fs.propagator->converged());
  const double cov = floquet_covariance_defect(gen, fs.monodromy);
  c.checks.at_most("floquet_covariance_defect", cov, 1e-8);
  add_choi_checks(c.checks, gen);
  const auto ss = floquet_steady_state(fs, gen);
  json q = json::array();
  Csv qcsv({"alpha", "quasienergy"});
  for (Eigen::Index a = 0; a < fs.quasienergies.size(); ++a) {
    q.push_back(fs.quasienergies(a));
    qcsv.row({std::to_string(a), num(fs.quasienergies(a))});
  }
  Csv rates({"frequency", "rate"});
  c.results["quasienergies"] = q;
  c.results["q_max"] = fs.q_max;
  c.results["degenerate"] = fs.degenerate;
  c.results["discarded_weight"] = fs.discarded_weight;
  c.results["propagator_steps"] = fs.propagator->steps();
  c.results["jumps"] = rates_json(gen, rates);
  json pops = json::array();
  for (Eigen::Index i = 0; i < ss.floquet_populations.size(); ++i) pops.push_back(ss.floquet_populations(i));
  c.results["steady_state"] = json{{"floquet_populations", pops},
                                   {"floquet_coherence", ss.floquet_coherence},
                                   {"frame_vs_stroboscopic", ss.frame_vs_stroboscopic},
                                   {"periods", ss.periods}};
  c.headline["q_max"] = fs.q_max;
  c.headline["floquet_covariance_defect"] = cov;
  c.headline["frame_vs_stroboscopic"] = ss.frame_vs_stroboscopic;
  c.csvs.emplace_back("quasienergies", qcsv.str());
  c.csvs.emplace_back("rates", rates.str());
}

DensityMatrix initial_state(const Context& c) {
  const InitialStateSpec& i = c.s.evolve.initial;
  const Eigen::Index d = c.s.system.dim;
  if (i.kind == "basis") return DensityMatrix::pure(basis_ket(d, i.index));
  if (i.kind == "ket") return DensityMatrix::pure(i.value.col(0));
  if (i.kind == "density") return DensityMatrix(i.value);
  if (i.kind == "maximally_mixed") return DensityMatrix::maximally_mixed(d);
  if (i.kind == "gibbs") {
    if (!c.s.bath) throw Error("a gibbs initial state needs a bath temperature");
    return DensityMatrix(gibbs_state(c.s.system.hamiltonian, c.s.bath->beta));
  }
  auto rng = std::mt19937_64(c.seed);
  return DensityMatrix(random_density(d, rng));
}

void run_evolve(Context& c) {
  const Scenario& s = c.s;
  const auto times = uniform_grid(s.evolve.t_final, s.evolve.points);
  const DensityMatrix rho0 = initial_state(c);
  EvolutionResult r;
  if (s.generator.type == "floquet") {
    auto [fs, gen] = build_floquet(c);
    c.stage = "dynamics";
    r.times = times;
    r.method = "covariant-propagator";
    r.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (double t : times) {
      const Mat rho = covariant_propagate(fs, gen, rho0, t, 0.0).matrix();
      r.max_trace_drift = std::max(r.max_trace_drift, std::abs(rho.trace() - cplx(1.0)));
      r.min_eigenvalue = std::min(r.min_eigenvalue, min_eigenvalue(rho));
      r.states.push_back(rho);
    }
  } else {
    std::optional<SpectralModel> model;
    if (s.bath) {
      c.stage = "bath";
      model = make_model(*s.bath);
      check_bochner(*model);
    }
    c.stage = "generators";
    const auto couplings = make_couplings(s);
    DaviesOptions o;
    o.require_kms = s.generator.require_kms;
    if (s.generator.type == "scl") {
      if (s.couplings.size() != 1) throw Error("the scl generator takes exactly one coupling");
      if (s.system.period > 0.0) {
        const PeriodicDrive drive = make_drive(s.system);
        const Mat diss = scl_generator(s.couplings[0].op, s.generator.scl_amplitude, s.couplings[0].lambda)
                             .superop()
                             .matrix();
        c.stage = "dynamics";
        r = lindblad_evolve([&](double t) -> Mat { return hamiltonian_superop(drive(t)) + diss; }, rho0, times,
                            s.evolve.rtol);
      } else {
        const auto gen = scl_generator(s.couplings[0].op, s.generator.scl_amplitude, s.couplings[0].lambda,
                                       s.system.hamiltonian);
        c.stage = "dynamics";
        r = lindblad_evolve(gen, rho0, times, s.evolve.rtol);
      }
    } else if (s.system.period > 0.0) {
      const PeriodicDrive drive = make_drive(s.system);
      r = adiabatic_davies_evolve(drive.sampler(), couplings, *model, rho0, times, o, s.evolve.rtol);
    } else {
      const auto gen = davies_generator(s.system.hamiltonian, couplings, *model, o);
      c.stage = "dynamics";
      r = lindblad_evolve(gen, rho0, times, s.evolve.rtol);
    }
  }
  c.checks.at_most("max_trace_drift", r.max_trace_drift, 1e-8);
  c.checks.at_least("min_eigenvalue", r.min_eigenvalue, -1e-8);
  c.results["method"] = r.method;
  c.results["steps"] = r.steps;
  c.results["final_state"] = matrix_json(r.states.back());
  c.headline["final_population_0"] = std::real(r.states.back()(0, 0));
  c.headline["max_trace_drift"] = r.max_trace_drift;
  Csv csv({"t", "row", "col", "re", "im"});
  for (std::size_t k = 0; k < r.times.size(); ++k)
    for (Eigen::Index j = 0; j < r.states[k].cols(); ++j)
      for (Eigen::Index i = 0; i < r.states[k].rows(); ++i)
        csv.row({num(r.times[k]), std::to_string(i), std::to_string(j), num(r.states[k](i, j).real()),
                 num(r.states[k](i, j).imag())});
  c.csvs.emplace_back("states", csv.str());
}

void run_sweep(Context& c) {
  const SweepSpec& w = c.s.sweep;
  GateSpeedSetup setup;
  setup.omega0 = w.omega0;
  setup.bath_spins = w.bath_spins;
  setup.spacing = w.spacing;
  setup.coupling = w.coupling;
  setup.target_rate = w.target_rate;
  setup.window = w.window;
  setup.time_points = w.time_points;
  setup.beta = w.beta;
  c.stage = "dynamics";
  std::vector<GateSpeedPoint> points(w.m_values.size());
  parallel_for(points.size(), c.opts.jobs, [&](std::size_t i) { points[i] = gate_speed_point(setup, w.m_values[i]); });
  Csv table({"m", "m_over_pi", "gate_time", "peak_deviation", "final_deviation"});
  Csv traces({"m", "t", "deviation"});
  std::vector<double> ms, peaks;
  json rows = json::array();
  for (const auto& p : points) {
    table.row({num(p.m), num(p.m / kPi), num(p.gate_time), num(p.peak_deviation), num(p.final_deviation)});
    for (std::size_t k = 0; k < p.times.size(); ++k) traces.row({num(p.m), num(p.times[k]), num(p.deviations[k])});
    ms.push_back(p.m);
    peaks.push_back(p.peak_deviation);
    rows.push_back(json{{"m", p.m}, {"peak_deviation", p.peak_deviation}, {"final_deviation", p.final_deviation}});
  }
  c.results["lambda"] = setup.lambda();
  c.results["points"] = rows;
  if (ms.size() >= 2) {
    const auto fit = nonmarkov_scaling_fit(ms, peaks);
    c.results["fit"] = json{{"beta", fit.beta},
                            {"prefactor", fit.prefactor},
                            {"r_squared", fit.r_squared},
                            {"non_decaying", fit.non_decaying}};
    c.headline["beta"] = fit.beta;
    c.headline["r_squared"] = fit.r_squared;
    const auto lo = std::min_element(ms.begin(), ms.end()) - ms.begin();
    const auto hi = std::max_element(ms.begin(), ms.end()) - ms.begin();
    c.checks.flag("slow_gate_closer_to_markov", peaks[static_cast<std::size_t>(hi)] < peaks[static_cast<std::size_t>(lo)]);
    c.checks.at_least("fit_beta", fit.beta, 0.0);
  }
  c.csvs.emplace_back("sweep", table.str());
  c.csvs.emplace_back("deviation", traces.str());
}

void run_qec(Context& c) {
  const QecSpec& q = c.s.qec;
  c.stage = "qec";
  const QecScenario base = bit_flip_code();
  const QecScenario code = build_code(base.codewords, base.errors, base.labels, q.ancilla_dim);
  std::mt19937_64 rng(c.seed);
  const Vec coeffs = random_ket(2, rng);
  const Vec psi = coeffs(0) * code.codewords[0] + coeffs(1) * code.codewords[1];
  const bool formula = q.ancilla_dim == code.reservoir_dim();

  std::vector<DensityMatrix> states;
  for (double p : q.p_values) states.push_back(ancilla_mixture(q.ancilla_dim, p));
  for (int i = 0; i < q.random_states; ++i) states.emplace_back(random_density(q.ancilla_dim, rng));
  std::vector<double> sim(states.size());
  parallel_for(states.size(), c.opts.jobs, [&](std::size_t i) { sim[i] = run_recovery(code, psi, states[i]).fidelity; });

  double worst = 0.0;
  Csv table({"p", "F_sim", "F_formula"});
  Csv random({"index", "rho_a_00", "F_sim", "F_formula"});
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double f = formula ? fidelity_prediction(code, states[i]) : std::nan("");
    if (formula) worst = std::max(worst, std::abs(sim[i] - f));
    if (i < q.p_values.size())
      table.row({num(q.p_values[i]), num(sim[i]), num(f)});
    else
      random.row({std::to_string(i - q.p_values.size()), num(std::real(states[i].matrix()(0, 0))), num(sim[i]), num(f)});
  }
  if (formula) c.checks.at_most("max_formula_deviation", worst, 1e-12);
  c.results["code"] = q.code;
  c.results["gram_defect"] = code.report.gram_defect;
  c.results["projector_overlap"] = code.report.projector_overlap;
  c.results["formula_available"] = formula;
  c.headline["max_formula_deviation"] = worst;
  c.headline["states"] = states.size();
  if (!q.p_values.empty()) c.csvs.emplace_back("fidelity", table.str());
  if (q.random_states > 0) c.csvs.emplace_back("random", random.str());
}

void run_validity(Context& c) {
  const Scenario& s = c.s;
  const ValiditySpec& v = s.validity;
  c.stage = "dynamics";
  std::optional<RabiDrive> rabi;
  if (v.rabi) rabi = RabiDrive{*v.rabi, v.detuning};
  ValidityReport r;
  if (s.system.period > 0.0) {
    c.stage = "floquet";
    const PeriodicDrive drive = make_drive(s.system);
    const FloquetSystem fs = floquet_analyze(drive.sampler(), drive.period());
    r = validity_report(fs, v.gate_time, v.m_max, rabi, v.factor);
  } else {
    std::vector<double> energies = s.system.energies;
    if (energies.empty()) {
      const RVec e = hermitian_eig(s.system.hamiltonian).values;
      energies.assign(e.data(), e.data() + e.size());
    }
    const Mat coupling = s.couplings.empty() || s.system.hamiltonian.size() == 0 ? Mat() : s.couplings[0].op;
    if (coupling.size() > 0 && s.system.energies.empty()) {
      // Bohr frequencies of the coupling need H in its eigenbasis.
      const auto es = hermitian_eig(s.system.hamiltonian);
      r = validity_report(energies, v.gate_time, v.drive_frequency, v.m_max, rabi,
                          Mat(es.vectors.adjoint() * coupling * es.vectors), v.factor);
    } else {
      r = validity_report(energies, v.gate_time, v.drive_frequency, v.m_max, rabi, Mat(), v.factor);
    }
  }
  auto arr = [](const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(x);
    return a;
  };
  c.results["bohr_frequencies"] = arr(r.bohr_frequencies);
  c.results["bohr_gaps"] = arr(r.bohr_gaps);
  c.results["min_gap"] = jnum(r.min_gap);
  c.results["t_floor"] = jnum(r.t_floor);
  c.results["gate_time"] = r.gate_time;
  c.results["band_width"] = r.band_width;
  c.results["margolus_levitin"] = arr(r.margolus_levitin);
  if (r.rabi_pi_time) c.results["rabi_pi_time"] = jnum(*r.rabi_pi_time);
  if (r.rabi_probability) c.results["rabi_probability"] = *r.rabi_probability;
  c.results["factor"] = r.factor;
  c.results["markovian_ok"] = r.markovian_ok;
  c.results["no_markov_generator"] = r.no_markov_generator;
  c.headline["t_floor"] = jnum(r.t_floor);
  c.headline["markovian_ok"] = r.markovian_ok;
  Csv csv({"quantity", "value"});
  for (double x : r.bohr_frequencies) csv.row({"bohr_frequency", num(x)});
  for (double x : r.effective_gaps) csv.row({"effective_gap", num(x)});
  for (double x : r.margolus_levitin) csv.row({"margolus_levitin", num(x)});
  c.csvs.emplace_back("validity", csv.str());
}

}  // namespace

RunOutcome run_scenario(const Scenario& s, const RunOptions& options) {
  Context c(s, options, options.seed.value_or(s.seed));
  json summary;
  summary["tool"] = "qmarkov";
  summary["version"] = kVersion;
  summary["kind"] = to_string(s.kind);
  summary["name"] = s.output_name();
  summary["seed"] = c.seed;
  summary["scenario"] = yaml_to_json(YAML::Load(serialize_scenario(s)));
  summary["tolerances"] = tolerances_json();

  RunOutcome out;
  try {
    switch (s.kind) {
      case ScenarioKind::generator: run_generator(c); break;
      case ScenarioKind::floquet: run_floquet(c); break;
      case ScenarioKind::evolve: run_evolve(c); break;
      case ScenarioKind::sweep: run_sweep(c); break;
      case ScenarioKind::qec: run_qec(c); break;
      case ScenarioKind::validity: run_validity(c); break;
    }
    summary["status"] = c.checks.all ? "ok" : "checks_failed";
    out.exit_code = c.checks.all ? 0 : 1;
  } catch (const BochnerViolation& e) {
    summary["status"] = "error";
    summary["error"] = json{{"type", "bochner_violation"}, {"module", c.stage}, {"omega", e.omega()},
                            {"value", e.value()}, {"message", e.what()}};
    out.exit_code = 3;
  } catch (const std::exception& e) {
    summary["status"] = "error";
    summary["error"] = json{{"type", "error"}, {"module", c.stage}, {"message", e.what()}};
    out.exit_code = 2;
  }
  summary["checks"] = c.checks.list;
  summary["headline"] = c.headline;
  summary["results"] = c.results;

  namespace fs = std::filesystem;
  const fs::path dir(options.out_dir);
  json outputs = json::array();
  for (const auto& [suffix, content] : c.csvs) {
    const auto path = (dir / (s.output_name() + "_" + suffix + ".csv")).string();
    write_atomic(path, content);
    out.csv_paths.push_back(path);
    outputs.push_back(fs::path(path).filename().string());
  }
  summary["outputs"] = outputs;
  out.summary_path = (dir / (s.output_name() + ".json")).string();
  write_atomic(out.summary_path, summary.dump(2) + "\n");
  return out;
}

std::string report_digest(const std::vector<std::string>& paths, bool* all_ok) {
  if (paths.empty()) throw std::invalid_argument("usage: qmarkov report SUMMARY.json [SUMMARY.json ...]");
  std::ostringstream os;
  bool ok = true;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      os << "== " << path << "\n  ERROR cannot open summary\n";
      ok = false;
      continue;
    }
    json j;
    try {
      j = json::parse(in);
    } catch (const std::exception& e) {
      os << "== " << path << "\n  ERROR not a JSON summary: " << e.what() << "\n";
      ok = false;
      continue;
    }
    os << "== " << j.value("name", std::string("?")) << " (" << j.value("kind", std::string("?")) << ") " << path << "\n";
    if (j.contains("checks"))
      for (const auto& chk : j["checks"]) {
        const bool pass = chk.value("pass", false);
        ok = ok && pass;
        os << "  " << (pass ? "PASS " : "FAIL ") << chk.value("name", std::string("?")) << " = " << chk["value"].dump()
           << " (" << chk.value("op", std::string("")) << " " << chk["threshold"].dump() << ")\n";
      }
    if (j.contains("headline"))
      for (const auto& [k, v] : j["headline"].items()) os << "  " << k << ": " << v.dump() << "\n";
    if (j.value("status", std::string("ok")) == "error") {
      ok = false;
      const auto& e = j["error"];
      if (e.value("type", std::string()) == "bochner_violation")
        os << "  ERROR Bochner violation in module " << e.value("module", std::string("?")) << " at omega = "
           << e["omega"].dump() << " (G = " << e["value"].dump() << ")\n";
      else
        os << "  ERROR in module " << e.value("module", std::string("?")) << ": " << e.value("message", std::string()) << "\n";
    }
  }
  os << (ok ? "OK" : "FAIL") << "\n";
  if (all_ok) *all_ok = ok;
  return os.str();
}

}  // namespace qmarkov
