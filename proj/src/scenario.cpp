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

#include "qmarkov/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmarkov/bath.hpp"

namespace qmarkov {

ScenarioError::ScenarioError(const std::string& key, int line, const std::string& message)
    : Error(key + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) + ": " + message),
      key_(key),
      line_(line) {}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::generator: return "generator";
    case ScenarioKind::floquet: return "floquet";
    case ScenarioKind::evolve: return "evolve";
    case ScenarioKind::sweep: return "sweep";
    case ScenarioKind::qec: return "qec";
    case ScenarioKind::validity: return "validity";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::generator, ScenarioKind::floquet, ScenarioKind::evolve, ScenarioKind::sweep,
                 ScenarioKind::qec, ScenarioKind::validity})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

std::string Scenario::output_name() const { return name.empty() ? std::string(to_string(kind)) : name; }

std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      cur[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j)
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const auto d = distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

[[noreturn]] void fail(const std::string& key, const YAML::Node& n, const std::string& msg) {
  throw ScenarioError(key, line_of(n), msg);
}

void check_keys(const YAML::Node& n, const std::string& path, const std::vector<std::string>& allowed) {
  if (!n.IsMap()) fail(path, n, "expected a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(path.empty() ? key : path + "." + key, kv.first,
           "unknown key '" + key + "'; did you mean '" + nearest_key(key, allowed) + "'?");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_double(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key, n, "expected a number");
  const auto s = n.Scalar();
  if (s == "inf" || s == ".inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-.inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(key, n, "'" + s + "' is not a number");
  }
}

int as_int(const YAML::Node& n, const std::string& key) {
  const double v = as_double(n, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, n, "expected an integer");
  return static_cast<int>(v);
}

bool as_bool(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    fail(key, n, "expected true or false");
  }
}

std::string as_string(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key, n, "expected a string");
  return n.Scalar();
}

std::vector<double> as_doubles(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(key, n, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(as_double(n[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

cplx as_complex(const YAML::Node& n, const std::string& key) {
  if (n.IsSequence()) {
    if (n.size() != 2) fail(key, n, "complex entries are written [re, im]");
    return {as_double(n[0], key), as_double(n[1], key)};
  }
  return {as_double(n, key), 0.0};
}

Mat named_operator(const std::string& name, Eigen::Index dim, const YAML::Node& n, const std::string& key) {
  if (name == "identity") {
    if (dim <= 0) fail(key, n, "identity needs system.dim");
    return identity(dim);
  }
  if (name == "pauli_x") return pauli_x();
  if (name == "pauli_y") return pauli_y();
  if (name == "pauli_z") return pauli_z();
  if (name == "sigma_plus") return sigma_plus();
  if (name == "sigma_minus") return sigma_minus();
  fail(key, n,
       "unknown operator '" + name + "'; did you mean '" +
           nearest_key(name, {"pauli_x", "pauli_y", "pauli_z", "sigma_plus", "sigma_minus", "identity"}) + "'?");
}

Mat matrix_literal(const YAML::Node& n, const std::string& key) {
  const auto rows = static_cast<Eigen::Index>(n.size());
  Mat m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const YAML::Node row = n[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != rows)
      fail(key, row, "matrix literal must be square (" + std::to_string(rows) + " rows)");
    for (Eigen::Index j = 0; j < rows; ++j) m(i, j) = as_complex(row[static_cast<std::size_t>(j)], key);
  }
  return m;
}

Mat parse_operator(const YAML::Node& n, const std::string& key, Eigen::Index dim);

Mat parse_term(const YAML::Node& n, const std::string& key, Eigen::Index dim) {
  check_keys(n, key, {"op", "coeff", "site"});
  if (!n["op"]) fail(key, n, "term needs 'op'");
  cplx coeff = n["coeff"] ? as_complex(n["coeff"], join(key, "coeff")) : cplx(1.0);
  if (n["site"]) {
    const int site = as_int(n["site"], join(key, "site"));
    Mat single = parse_operator(n["op"], join(key, "op"), 2);
    if (single.rows() != 2) fail(join(key, "op"), n["op"], "'site' embeds a single-qubit (2x2) operator");
    if (dim <= 0) fail(join(key, "site"), n["site"], "'site' needs system.dim");
    int qubits = 0;
    while ((Eigen::Index(1) << qubits) < dim) ++qubits;
    if ((Eigen::Index(1) << qubits) != dim) fail(join(key, "site"), n["site"], "system.dim is not a power of two");
    if (site < 0 || site >= qubits)
      fail(join(key, "site"), n["site"], "site must lie in [0, " + std::to_string(qubits - 1) + "]");
    return coeff * qubit_site_op(single, site, qubits);
  }
  return coeff * parse_operator(n["op"], join(key, "op"), dim);
}

Mat parse_operator(const YAML::Node& n, const std::string& key, Eigen::Index dim) {
  if (!n || n.IsNull()) fail(key, n, "missing operator");
  if (n.IsScalar()) return named_operator(n.Scalar(), dim, n, key);
  if (n.IsMap()) return parse_term(n, key, dim);
  if (n.IsSequence() && n.size() > 0 && n[0].IsMap()) {
    Mat sum;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string k = key + "[" + std::to_string(i) + "]";
      Mat t = parse_term(n[i], k, dim);
      if (sum.size() == 0) sum = Mat::Zero(t.rows(), t.cols());
      if (t.rows() != sum.rows())
        fail(k, n[i], "term is " + std::to_string(t.rows()) + "x" + std::to_string(t.rows()) + " but earlier terms are " +
                          std::to_string(sum.rows()) + "x" + std::to_string(sum.rows()));
      sum += t;
    }
    return sum;
  }
  if (n.IsSequence() && n.size() > 0 && n[0].IsSequence()) return matrix_literal(n, key);
  fail(key, n, "expected an operator name, a matrix literal or a list of terms");
}

std::string dims(const Mat& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_hermitian(const Mat& m, const std::string& key, const YAML::Node& n) {
  if (!is_hermitian(m))
    fail(key, n, "operator must be Hermitian (deviation " + std::to_string(hermiticity_deviation(m)) + ")");
}

void parse_system(const YAML::Node& n, Scenario& s) {
  check_keys(n, "system", {"dim", "hamiltonian", "energies", "drive"});
  SystemSpec& sys = s.system;
  if (n["dim"]) {
    sys.dim = as_int(n["dim"], "system.dim");
    if (sys.dim < 1) fail("system.dim", n["dim"], "must be positive");
  }
  if (n["hamiltonian"]) {
    sys.hamiltonian = parse_operator(n["hamiltonian"], "system.hamiltonian", sys.dim);
    if (sys.dim > 0 && sys.hamiltonian.rows() != sys.dim)
      fail("system.hamiltonian", n["hamiltonian"],
           "system.hamiltonian is " + dims(sys.hamiltonian) + " but system.dim is " + std::to_string(sys.dim));
    sys.dim = sys.hamiltonian.rows();
    require_hermitian(sys.hamiltonian, "system.hamiltonian", n["hamiltonian"]);
  }
  if (n["energies"]) {
    sys.energies = as_doubles(n["energies"], "system.energies");
    if (sys.energies.empty()) fail("system.energies", n["energies"], "must not be empty");
  }
  if (n["drive"]) {
    const YAML::Node d = n["drive"];
    check_keys(d, "system.drive", {"period", "terms"});
    if (!d["period"]) fail("system.drive", d, "missing 'period'");
    sys.period = as_double(d["period"], "system.drive.period");
    if (!(sys.period > 0.0) || std::isinf(sys.period)) fail("system.drive.period", d["period"], "must be positive");
    if (!d["terms"] || !d["terms"].IsSequence()) fail("system.drive.terms", d, "expected a list of drive terms");
    for (std::size_t i = 0; i < d["terms"].size(); ++i) {
      const std::string key = "system.drive.terms[" + std::to_string(i) + "]";
      const YAML::Node t = d["terms"][i];
      check_keys(t, key, {"op", "shape", "harmonic", "amplitude", "samples"});
      DriveTermSpec term;
      term.op = parse_operator(t["op"], key + ".op", sys.dim);
      if (sys.hamiltonian.size() > 0 && term.op.rows() != sys.hamiltonian.rows())
        fail(key + ".op", t["op"],
             key + ".op is " + dims(term.op) + " but system.hamiltonian is " + dims(sys.hamiltonian));
      require_hermitian(term.op, key + ".op", t["op"]);
      if (t["shape"]) term.shape = as_string(t["shape"], key + ".shape");
      if (term.shape != "cos" && term.shape != "sin" && term.shape != "table")
        fail(key + ".shape", t["shape"], "shape must be cos, sin or table");
      if (t["harmonic"]) term.harmonic = as_int(t["harmonic"], key + ".harmonic");
      if (t["amplitude"]) term.amplitude = as_double(t["amplitude"], key + ".amplitude");
      if (t["samples"]) term.samples = as_doubles(t["samples"], key + ".samples");
      if (term.shape == "table" && term.samples.size() < 4)
        fail(key + ".samples", t, "a table drive needs at least four samples");
      sys.drive.push_back(std::move(term));
    }
  }
}

void parse_couplings(const YAML::Node& n, Scenario& s) {
  if (!n.IsSequence()) fail("couplings", n, "expected a list of {op, lambda}");
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string key = "couplings[" + std::to_string(i) + "]";
    check_keys(n[i], key, {"op", "lambda"});
    CouplingSpec c;
    c.op = parse_operator(n[i]["op"], key + ".op", s.system.dim);
    if (s.system.hamiltonian.size() > 0 && c.op.rows() != s.system.hamiltonian.rows())
      fail(key + ".op", n[i]["op"],
           key + ".op is " + dims(c.op) + " but system.hamiltonian is " + dims(s.system.hamiltonian));
    require_hermitian(c.op, key + ".op", n[i]["op"]);
    if (n[i]["lambda"]) c.lambda = as_double(n[i]["lambda"], key + ".lambda");
    s.couplings.push_back(std::move(c));
  }
}

void parse_bath(const YAML::Node& n, Scenario& s, const std::string& base_dir) {
  check_keys(n, "bath", {"kind", "beta", "cutoff", "amplitude", "table_file", "omega", "values"});
  BathSpec b;
  if (n["kind"]) b.kind = as_string(n["kind"], "bath.kind");
  if (b.kind != "bosonic_cubic" && b.kind != "flat" && b.kind != "tabulated")
    fail("bath.kind", n["kind"],
         "unknown bath kind '" + b.kind + "'; did you mean '" +
             nearest_key(b.kind, {"bosonic_cubic", "flat", "tabulated"}) + "'?");
  if (n["beta"]) b.beta = as_double(n["beta"], "bath.beta");
  if (n["cutoff"]) b.cutoff = as_double(n["cutoff"], "bath.cutoff");
  if (n["amplitude"]) b.amplitude = as_double(n["amplitude"], "bath.amplitude");
  if (b.kind == "flat" && !n["cutoff"]) b.cutoff = std::numeric_limits<double>::infinity();
  if (b.kind == "flat" && !n["beta"]) b.beta = 0.0;
  if (b.beta < 0.0) fail("bath.beta", n["beta"], "must be non-negative");
  if (b.kind == "tabulated") {
    if (n["table_file"]) {
      const auto rel = as_string(n["table_file"], "bath.table_file");
      const auto path = std::filesystem::path(base_dir) / rel;
      SpectralModel m = [&] {
        try {
          return load_tabulated_csv(path.string(), b.beta);
        } catch (const std::exception& e) {
          fail("bath.table_file", n["table_file"], e.what());
        }
      }();
      b.omega = m.table_omega();
      b.values = m.table_value();
    } else {
      if (!n["omega"] || !n["values"]) fail("bath", n, "a tabulated bath needs table_file or omega and values");
      b.omega = as_doubles(n["omega"], "bath.omega");
      b.values = as_doubles(n["values"], "bath.values");
      if (b.omega.size() != b.values.size())
        fail("bath.values", n["values"], "bath.values has " + std::to_string(b.values.size()) +
                                             " entries but bath.omega has " + std::to_string(b.omega.size()));
    }
    if (b.omega.size() < 2) fail("bath", n, "a tabulated bath needs at least two points");
  }
  s.bath = std::move(b);
}

void parse_evolve(const YAML::Node& n, Scenario& s) {
  check_keys(n, "evolve", {"t_final", "points", "rtol", "initial"});
  EvolveSpec& e = s.evolve;
  if (n["t_final"]) e.t_final = as_double(n["t_final"], "evolve.t_final");
  if (n["points"]) e.points = as_int(n["points"], "evolve.points");
  if (n["rtol"]) e.rtol = as_double(n["rtol"], "evolve.rtol");
  if (!(e.t_final > 0.0)) fail("evolve.t_final", n["t_final"], "must be positive");
  if (e.points < 2) fail("evolve.points", n["points"], "need at least two time points");
  if (n["initial"]) {
    const YAML::Node i = n["initial"];
    check_keys(i, "evolve.initial", {"kind", "index", "value"});
    if (i["kind"]) e.initial.kind = as_string(i["kind"], "evolve.initial.kind");
    const std::vector<std::string> kinds{"basis", "ket", "density", "maximally_mixed", "gibbs", "random"};
    if (std::find(kinds.begin(), kinds.end(), e.initial.kind) == kinds.end())
      fail("evolve.initial.kind", i["kind"],
           "unknown initial state '" + e.initial.kind + "'; did you mean '" + nearest_key(e.initial.kind, kinds) + "'?");
    if (i["index"]) e.initial.index = as_int(i["index"], "evolve.initial.index");
    const Eigen::Index d = s.system.dim;
    if (e.initial.kind == "basis" && (e.initial.index < 0 || (d > 0 && e.initial.index >= d)))
      fail("evolve.initial.index", i["index"] ? i["index"] : i, "basis index out of range for system.dim");
    if (e.initial.kind == "ket") {
      if (!i["value"] || !i["value"].IsSequence()) fail("evolve.initial.value", i, "ket needs a list of amplitudes");
      Vec v(static_cast<Eigen::Index>(i["value"].size()));
      for (std::size_t k = 0; k < i["value"].size(); ++k) v(Eigen::Index(k)) = as_complex(i["value"][k], "evolve.initial.value");
      if (v.size() != d)
        fail("evolve.initial.value", i["value"],
             "evolve.initial.value has " + std::to_string(v.size()) + " entries but system.dim is " + std::to_string(d));
      if (std::abs(v.norm() - 1.0) > 1e-10) fail("evolve.initial.value", i["value"], "ket is not normalized");
      e.initial.value = v;
    }
    if (e.initial.kind == "density") {
      e.initial.value = parse_operator(i["value"], "evolve.initial.value", d);
      if (e.initial.value.rows() != d)
        fail("evolve.initial.value", i["value"],
             "evolve.initial.value is " + dims(e.initial.value) + " but system.dim is " + std::to_string(d));
      try {
        DensityMatrix check(e.initial.value);
      } catch (const std::exception& ex) {
        fail("evolve.initial.value", i["value"], ex.what());
      }
    }
  }
}

void parse_sweep(const YAML::Node& n, Scenario& s) {
  check_keys(n, "sweep", {"m_values", "m_over_pi", "omega0", "bath_spins", "spacing", "coupling", "target_rate",
                          "window", "time_points", "beta"});
  SweepSpec& w = s.sweep;
  if (n["m_values"]) w.m_values = as_doubles(n["m_values"], "sweep.m_values");
  if (n["m_over_pi"])
    for (double x : as_doubles(n["m_over_pi"], "sweep.m_over_pi")) w.m_values.push_back(x * kPi);
  for (double m : w.m_values)
    if (!(m > 0.0)) fail("sweep.m_values", n, "M values must be positive");
  if (n["omega0"]) w.omega0 = as_double(n["omega0"], "sweep.omega0");
  if (n["bath_spins"]) w.bath_spins = as_int(n["bath_spins"], "sweep.bath_spins");
  if (n["spacing"]) w.spacing = as_double(n["spacing"], "sweep.spacing");
  if (n["coupling"]) w.coupling = as_double(n["coupling"], "sweep.coupling");
  if (n["target_rate"]) w.target_rate = as_double(n["target_rate"], "sweep.target_rate");
  if (n["window"]) w.window = as_double(n["window"], "sweep.window");
  if (n["time_points"]) w.time_points = as_int(n["time_points"], "sweep.time_points");
  if (n["beta"]) w.beta = as_double(n["beta"], "sweep.beta");
  if (w.bath_spins < 2 || w.bath_spins > 9) fail("sweep.bath_spins", n["bath_spins"], "must lie in [2, 9]");
  if (w.time_points < 2) fail("sweep.time_points", n["time_points"], "need at least two time points");
}

void parse_qec(const YAML::Node& n, Scenario& s) {
  check_keys(n, "qec", {"code", "p_values", "random_states", "ancilla_dim"});
  QecSpec& q = s.qec;
  if (n["code"]) q.code = as_string(n["code"], "qec.code");
  if (q.code != "bit_flip") fail("qec.code", n["code"], "only the bit_flip code is available");
  if (n["p_values"]) q.p_values = as_doubles(n["p_values"], "qec.p_values");
  for (double p : q.p_values)
    if (!(p >= 0.0 && p <= 1.0)) fail("qec.p_values", n["p_values"], "p values must lie in [0, 1]");
  if (n["random_states"]) q.random_states = as_int(n["random_states"], "qec.random_states");
  if (n["ancilla_dim"]) q.ancilla_dim = as_int(n["ancilla_dim"], "qec.ancilla_dim");
  if (q.ancilla_dim < 4) fail("qec.ancilla_dim", n["ancilla_dim"], "must be at least the number of errors (4)");
}

void parse_validity(const YAML::Node& n, Scenario& s) {
  check_keys(n, "validity", {"gate_time", "drive_frequency", "m_max", "rabi", "detuning", "factor"});
  ValiditySpec& v = s.validity;
  if (!n["gate_time"]) fail("validity", n, "missing 'gate_time'");
  v.gate_time = as_double(n["gate_time"], "validity.gate_time");
  if (!(v.gate_time > 0.0)) fail("validity.gate_time", n["gate_time"], "must be positive");
  if (n["drive_frequency"]) v.drive_frequency = as_double(n["drive_frequency"], "validity.drive_frequency");
  if (n["m_max"]) v.m_max = as_int(n["m_max"], "validity.m_max");
  if (n["rabi"]) v.rabi = as_double(n["rabi"], "validity.rabi");
  if (n["detuning"]) v.detuning = as_double(n["detuning"], "validity.detuning");
  if (n["factor"]) v.factor = as_double(n["factor"], "validity.factor");
}

void require(bool ok, const std::string& key, const YAML::Node& n, const std::string& msg) {
  if (!ok) fail(key, n, msg);
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("<document>", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ScenarioError("<document>", 0, "empty scenario");
  check_keys(root, "", {"kind", "name", "seed", "system", "couplings", "bath", "generator", "evolve", "sweep", "qec",
                        "validity"});
  Scenario s;
  if (!root["kind"]) fail("kind", root, "missing 'kind'");
  try {
    s.kind = scenario_kind_from_string(as_string(root["kind"], "kind"));
  } catch (const std::invalid_argument&) {
    const auto k = root["kind"].Scalar();
    fail("kind", root["kind"],
         "unknown kind '" + k + "'; did you mean '" +
             nearest_key(k, {"generator", "floquet", "evolve", "sweep", "qec", "validity"}) + "'?");
  }
  if (root["name"]) s.name = as_string(root["name"], "name");
  if (root["seed"]) {
    const double seed = as_double(root["seed"], "seed");
    if (seed < 0 || seed != std::floor(seed)) fail("seed", root["seed"], "seed must be a non-negative integer");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (root["system"]) parse_system(root["system"], s);
  if (root["couplings"]) parse_couplings(root["couplings"], s);
  if (root["bath"]) parse_bath(root["bath"], s, base_dir);
  if (root["generator"]) {
    const YAML::Node g = root["generator"];
    check_keys(g, "generator", {"type", "scl_amplitude", "require_kms"});
    if (g["type"]) s.generator.type = as_string(g["type"], "generator.type");
    if (s.generator.type != "davies" && s.generator.type != "scl" && s.generator.type != "floquet")
      fail("generator.type", g["type"],
           "unknown generator type '" + s.generator.type + "'; did you mean '" +
               nearest_key(s.generator.type, {"davies", "scl", "floquet"}) + "'?");
    if (g["scl_amplitude"]) s.generator.scl_amplitude = as_double(g["scl_amplitude"], "generator.scl_amplitude");
    if (g["require_kms"]) s.generator.require_kms = as_bool(g["require_kms"], "generator.require_kms");
  }
  if (root["evolve"]) parse_evolve(root["evolve"], s);
  if (root["sweep"]) parse_sweep(root["sweep"], s);
  if (root["qec"]) parse_qec(root["qec"], s);
  if (root["validity"]) parse_validity(root["validity"], s);

  const bool has_h = s.system.hamiltonian.size() > 0;
  const bool needs_bath = s.generator.type != "scl";
  switch (s.kind) {
    case ScenarioKind::generator:
    case ScenarioKind::evolve:
      require(has_h, "system.hamiltonian", root, std::string(to_string(s.kind)) + " scenarios need system.hamiltonian");
      require(!s.couplings.empty(), "couplings", root, "at least one coupling is required");
      require(!needs_bath || s.bath.has_value(), "bath", root, "the " + s.generator.type + " generator needs a bath");
      if (s.generator.type == "floquet")
        require(s.system.period > 0.0, "system.drive", root, "the floquet generator needs system.drive");
      break;
    case ScenarioKind::floquet:
      require(has_h, "system.hamiltonian", root, "floquet scenarios need system.hamiltonian");
      require(s.system.period > 0.0, "system.drive", root, "floquet scenarios need system.drive");
      require(!s.couplings.empty(), "couplings", root, "at least one coupling is required");
      require(s.bath.has_value(), "bath", root, "floquet scenarios need a bath");
      break;
    case ScenarioKind::sweep:
      require(!s.sweep.m_values.empty(), "sweep.m_values", root["sweep"] ? root["sweep"] : root,
              "sweep axis must not be empty");
      break;
    case ScenarioKind::qec:
      require(!s.qec.p_values.empty() || s.qec.random_states > 0, "qec.p_values", root["qec"] ? root["qec"] : root,
              "sweep axis must not be empty (give p_values or random_states)");
      break;
    case ScenarioKind::validity:
      require(has_h || !s.system.energies.empty(), "system", root, "validity scenarios need hamiltonian or energies");
      require(root["validity"].IsDefined(), "validity", root, "missing 'validity' section");
      break;
  }
  return s;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), std::filesystem::path(path).parent_path().string().empty()
                                           ? std::string(".")
                                           : std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void emit_number(YAML::Emitter& out, double x) {
  if (std::isinf(x)) {
    out << (x > 0 ? "inf" : "-inf");
    return;
  }
  std::ostringstream os;
  os.precision(17);
  os << x;
  out << os.str();
}

void emit_numbers(YAML::Emitter& out, const std::vector<double>& xs) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : xs) emit_number(out, x);
  out << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const Mat& m) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << YAML::BeginSeq;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).imag() == 0.0) {
        emit_number(out, m(i, j).real());
      } else {
        out << YAML::BeginSeq;
        emit_number(out, m(i, j).real());
        emit_number(out, m(i, j).imag());
        out << YAML::EndSeq;
      }
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(s.kind);
  if (!s.name.empty()) out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << s.name;
  out << YAML::Key << "seed" << YAML::Value << s.seed;

  const SystemSpec& sys = s.system;
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  if (sys.dim > 0) out << YAML::Key << "dim" << YAML::Value << static_cast<long long>(sys.dim);
  if (sys.hamiltonian.size() > 0) {
    out << YAML::Key << "hamiltonian" << YAML::Value;
    emit_matrix(out, sys.hamiltonian);
  }
  if (!sys.energies.empty()) {
    out << YAML::Key << "energies" << YAML::Value;
    emit_numbers(out, sys.energies);
  }
  if (sys.period > 0.0) {
    out << YAML::Key << "drive" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "period" << YAML::Value;
    emit_number(out, sys.period);
    out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : sys.drive) {
      out << YAML::BeginMap << YAML::Key << "op" << YAML::Value;
      emit_matrix(out, t.op);
      out << YAML::Key << "shape" << YAML::Value << t.shape;
      out << YAML::Key << "harmonic" << YAML::Value << t.harmonic;
      out << YAML::Key << "amplitude" << YAML::Value;
      emit_number(out, t.amplitude);
      if (!t.samples.empty()) {
        out << YAML::Key << "samples" << YAML::Value;
        emit_numbers(out, t.samples);
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndMap;

  if (!s.couplings.empty()) {
    out << YAML::Key << "couplings" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : s.couplings) {
      out << YAML::BeginMap << YAML::Key << "op" << YAML::Value;
      emit_matrix(out, c.op);
      out << YAML::Key << "lambda" << YAML::Value;
      emit_number(out, c.lambda);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (s.bath) {
    const BathSpec& b = *s.bath;
    out << YAML::Key << "bath" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << b.kind;
    out << YAML::Key << "beta" << YAML::Value;
    emit_number(out, b.beta);
    out << YAML::Key << "cutoff" << YAML::Value;
    emit_number(out, b.cutoff);
    out << YAML::Key << "amplitude" << YAML::Value;
    emit_number(out, b.amplitude);
    if (b.kind == "tabulated") {
      out << YAML::Key << "omega" << YAML::Value;
      emit_numbers(out, b.omega);
      out << YAML::Key << "values" << YAML::Value;
      emit_numbers(out, b.values);
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << s.generator.type;
  out << YAML::Key << "scl_amplitude" << YAML::Value;
  emit_number(out, s.generator.scl_amplitude);
  out << YAML::Key << "require_kms" << YAML::Value << s.generator.require_kms;
  out << YAML::EndMap;

  {
    const EvolveSpec& e = s.evolve;
    out << YAML::Key << "evolve" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "t_final" << YAML::Value;
    emit_number(out, e.t_final);
    out << YAML::Key << "points" << YAML::Value << e.points;
    out << YAML::Key << "rtol" << YAML::Value;
    emit_number(out, e.rtol);
    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << e.initial.kind;
    out << YAML::Key << "index" << YAML::Value << e.initial.index;
    if (e.initial.kind == "ket") {
      out << YAML::Key << "value" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (Eigen::Index i = 0; i < e.initial.value.rows(); ++i) {
        out << YAML::BeginSeq;
        emit_number(out, e.initial.value(i, 0).real());
        emit_number(out, e.initial.value(i, 0).imag());
        out << YAML::EndSeq;
      }
      out << YAML::EndSeq;
    } else if (e.initial.kind == "density") {
      out << YAML::Key << "value" << YAML::Value;
      emit_matrix(out, e.initial.value);
    }
    out << YAML::EndMap << YAML::EndMap;
  }
  {
    const SweepSpec& w = s.sweep;
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "m_values" << YAML::Value;
    emit_numbers(out, w.m_values);
    out << YAML::Key << "omega0" << YAML::Value;
    emit_number(out, w.omega0);
    out << YAML::Key << "bath_spins" << YAML::Value << w.bath_spins;
    out << YAML::Key << "spacing" << YAML::Value;
    emit_number(out, w.spacing);
    out << YAML::Key << "coupling" << YAML::Value;
    emit_number(out, w.coupling);
    out << YAML::Key << "target_rate" << YAML::Value;
    emit_number(out, w.target_rate);
    out << YAML::Key << "window" << YAML::Value;
    emit_number(out, w.window);
    out << YAML::Key << "time_points" << YAML::Value << w.time_points;
    out << YAML::Key << "beta" << YAML::Value;
    emit_number(out, w.beta);
    out << YAML::EndMap;
  }
  {
    const QecSpec& q = s.qec;
    out << YAML::Key << "qec" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "code" << YAML::Value << q.code;
    out << YAML::Key << "p_values" << YAML::Value;
    emit_numbers(out, q.p_values);
    out << YAML::Key << "random_states" << YAML::Value << q.random_states;
    out << YAML::Key << "ancilla_dim" << YAML::Value << q.ancilla_dim;
    out << YAML::EndMap;
  }
  {
    const ValiditySpec& v = s.validity;
    out << YAML::Key << "validity" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "gate_time" << YAML::Value;
    emit_number(out, v.gate_time);
    out << YAML::Key << "drive_frequency" << YAML::Value;
    emit_number(out, v.drive_frequency);
    out << YAML::Key << "m_max" << YAML::Value << v.m_max;
    if (v.rabi) {
      out << YAML::Key << "rabi" << YAML::Value;
      emit_number(out, *v.rabi);
    }
    out << YAML::Key << "detuning" << YAML::Value;
    emit_number(out, v.detuning);
    out << YAML::Key << "factor" << YAML::Value;
    emit_number(out, v.factor);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

namespace {

bool same(const Mat& a, const Mat& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.kind != b.kind || a.name != b.name || a.seed != b.seed) return false;
  const auto& x = a.system;
  const auto& y = b.system;
  if (x.dim != y.dim || !same(x.hamiltonian, y.hamiltonian) || x.energies != y.energies || x.period != y.period ||
      x.drive.size() != y.drive.size())
    return false;
  for (std::size_t i = 0; i < x.drive.size(); ++i) {
    const auto& p = x.drive[i];
    const auto& q = y.drive[i];
    if (!same(p.op, q.op) || p.shape != q.shape || p.harmonic != q.harmonic || p.amplitude != q.amplitude ||
        p.samples != q.samples)
      return false;
  }
  if (a.couplings.size() != b.couplings.size()) return false;
  for (std::size_t i = 0; i < a.couplings.size(); ++i)
    if (!same(a.couplings[i].op, b.couplings[i].op) || a.couplings[i].lambda != b.couplings[i].lambda) return false;
  if (a.bath.has_value() != b.bath.has_value()) return false;
  if (a.bath) {
    const auto& p = *a.bath;
    const auto& q = *b.bath;
    if (p.kind != q.kind || p.beta != q.beta || p.cutoff != q.cutoff || p.amplitude != q.amplitude ||
        p.omega != q.omega || p.values != q.values)
      return false;
  }
  if (a.generator.type != b.generator.type || a.generator.scl_amplitude != b.generator.scl_amplitude ||
      a.generator.require_kms != b.generator.require_kms)
    return false;
  const auto& e = a.evolve;
  const auto& f = b.evolve;
  if (e.t_final != f.t_final || e.points != f.points || e.rtol != f.rtol || e.initial.kind != f.initial.kind ||
      e.initial.index != f.initial.index || !same(e.initial.value, f.initial.value))
    return false;
  const auto& w = a.sweep;
  const auto& v = b.sweep;
  if (w.m_values != v.m_values || w.omega0 != v.omega0 || w.bath_spins != v.bath_spins || w.spacing != v.spacing ||
      w.coupling != v.coupling || w.target_rate != v.target_rate || w.window != v.window ||
      w.time_points != v.time_points || w.beta != v.beta)
    return false;
  if (a.qec.code != b.qec.code || a.qec.p_values != b.qec.p_values || a.qec.random_states != b.qec.random_states ||
      a.qec.ancilla_dim != b.qec.ancilla_dim)
    return false;
  const auto& r = a.validity;
  const auto& t = b.validity;
  return r.gate_time == t.gate_time && r.drive_frequency == t.drive_frequency && r.m_max == t.m_max &&
         r.rabi == t.rabi && r.detuning == t.detuning && r.factor == t.factor;
}

// ---------------------------------------------------------------------------

void apply_tolerance_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("tolerance override must be KEY=VAL, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(assignment.substr(eq + 1), &used);
    if (used != assignment.size() - eq - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("tolerance override '" + assignment + "' has a non-numeric value");
  }
  if (!(value >= 0.0)) throw std::invalid_argument("tolerance override '" + assignment + "' must be non-negative");
  Tolerances& t = Tolerances::defaults();
  const std::vector<std::pair<std::string, double*>> fields{
      {"hermitian", &t.hermitian}, {"unitary", &t.unitary}, {"trace", &t.trace},
      {"positivity", &t.positivity}, {"cluster", &t.cluster}, {"bochner", &t.bochner},
      {"markov_factor", &t.markov_factor}};
  for (const auto& [name, ptr] : fields)
    if (name == key) {
      *ptr = value;
      return;
    }
  std::vector<std::string> names;
  for (const auto& f : fields) names.push_back(f.first);
  throw std::invalid_argument("unknown tolerance '" + key + "'; did you mean '" + nearest_key(key, names) + "'?");
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace qmarkov
