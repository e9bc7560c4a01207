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

#pragma once

// Declarative scenario files (YAML) and the pipelines they drive.
//
// Operators are written as named standard operators (pauli_x, pauli_y,
// pauli_z, sigma_plus, sigma_minus, identity), matrix literals (rows of
// numbers or [re, im] pairs) or sums of terms {op, coeff, site}, where `site`
// embeds a single-qubit operator into a register of log2(dim) qubits.

#include <optional>
#include <string>
#include <vector>

#include "qmarkov/bath.hpp"
#include "qmarkov/core.hpp"

namespace qmarkov {

class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

enum class ScenarioKind { generator, floquet, evolve, sweep, qec, validity };
const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct DriveTermSpec {
  Mat op;
  std::string shape = "cos";  // cos | sin | table
  int harmonic = 1;
  double amplitude = 1.0;
  std::vector<double> samples;  // for shape == table
};

struct SystemSpec {
  Eigen::Index dim = 0;
  Mat hamiltonian;
  std::vector<double> energies;  // validity scenarios may give levels instead of H
  double period = 0.0;           // > 0 when driven
  std::vector<DriveTermSpec> drive;
};

struct CouplingSpec {
  Mat op;
  double lambda = 1.0;
};

struct BathSpec {
  std::string kind = "bosonic_cubic";  // bosonic_cubic | flat | tabulated
  double beta = 1.0;
  double cutoff = 5.0;
  double amplitude = 1.0;
  std::vector<double> omega;  // tabulated grid
  std::vector<double> values;
};

struct GeneratorSpec {
  std::string type = "davies";  // davies | scl | floquet
  double scl_amplitude = 1.0;
  bool require_kms = true;
};

struct InitialStateSpec {
  std::string kind = "basis";  // basis | ket | density | maximally_mixed | gibbs | random
  int index = 0;
  Mat value;  // ket (column) or density matrix
};

struct EvolveSpec {
  double t_final = 10.0;
  int points = 101;
  double rtol = 1e-9;
  InitialStateSpec initial;
};

struct SweepSpec {
  std::vector<double> m_values;
  double omega0 = 1.0;
  int bath_spins = 6;
  double spacing = 0.01;
  double coupling = 1.0;
  double target_rate = 0.002;
  double window = 200.0;
  int time_points = 201;
  double beta = kInfiniteBeta;
};

struct QecSpec {
  std::string code = "bit_flip";
  std::vector<double> p_values;
  int random_states = 0;
  int ancilla_dim = 4;
};

struct ValiditySpec {
  double gate_time = 1.0;
  double drive_frequency = 0.0;
  int m_max = 0;
  std::optional<double> rabi;
  double detuning = 0.0;
  double factor = -1.0;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::generator;
  std::string name;
  std::uint64_t seed = 0;
  SystemSpec system;
  std::vector<CouplingSpec> couplings;
  std::optional<BathSpec> bath;
  GeneratorSpec generator;
  EvolveSpec evolve;
  SweepSpec sweep;
  QecSpec qec;
  ValiditySpec validity;

  std::string output_name() const;
};

bool operator==(const Scenario& a, const Scenario& b);

// `base_dir` resolves relative table files.
Scenario parse_scenario_text(const std::string& text, const std::string& base_dir = ".");
Scenario parse_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Sets a Tolerances::defaults() field from "KEY=VAL".
void apply_tolerance_override(const std::string& assignment);

struct RunOptions {
  std::string out_dir = ".";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  int exit_code = 0;
  std::string summary_path;
  std::vector<std::string> csv_paths;
};

RunOutcome run_scenario(const Scenario& s, const RunOptions& options);

// Human-readable digest of one or more JSON summaries. Returns the text; the
// last line is "OK" when every check passed and no summary holds an error.
std::string report_digest(const std::vector<std::string>& summary_paths, bool* all_ok = nullptr);

// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

// Closest candidate by edit distance.
std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qmarkov
