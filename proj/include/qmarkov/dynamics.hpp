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

// Time evolution, the second-order Born cumulant, an exact spin-star bath
// oracle and Markov-validity diagnostics.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmarkov/bath.hpp"
#include "qmarkov/core.hpp"
#include "qmarkov/floquet.hpp"
#include "qmarkov/generators.hpp"

namespace qmarkov {

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Mat> states;
  std::size_t steps = 0;
  double rtol = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  std::string method;
};

std::vector<double> uniform_grid(double t_final, int points);

// Full superoperator (d^2 x d^2) at time t.
using SuperopFn = std::function<Mat(double)>;

// Adaptive Dormand-Prince integration of d vec(rho)/dt = L vec(rho). Aborts
// with Error if a state's minimum eigenvalue drops below -1e-6.
EvolutionResult lindblad_evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                const std::vector<double>& times, double rtol = 1e-9);
EvolutionResult lindblad_evolve(const SuperopFn& gen, const DensityMatrix& rho0,
                                const std::vector<double>& times, double rtol = 1e-9);

// Davies generator of the instantaneous Hamiltonian H(t), including -i[H(t), .].
EvolutionResult adiabatic_davies_evolve(const HamiltonianFn& h, const std::vector<Coupling>& couplings,
                                        const SpectralModel& model, const DensityMatrix& rho0,
                                        const std::vector<double>& times, const DaviesOptions& options = {},
                                        double rtol = 1e-9);

// K(t) rho = int_0^t int_0^t F(u - s) S(s) rho S(u) ds du
//          - int_0^t ds int_0^s du [F(s - u) S(s) S(u) rho + F(u - s) rho S(u) S(s)]
// with S(s) = U(s,0)^dag S U(s,0). Evaluated on a uniform grid: composite
// Simpson for the outer integrals and Simpson / 3/8 rules for the inner one.
struct BornCumulant {
  double t = 0.0;
  int intervals = 0;
  Superoperator full;
  Mat lamb_shift;  // Hermitian H_LS with full = dissipative - i[H_LS, .]

  Superoperator dissipative() const;
};

BornCumulant born_cumulant(const HamiltonianFn& h, const Mat& s, const CorrelationFn& f, double t, int intervals);
// Grid chosen to resolve both 1/cutoff and the fastest scale of H(0) unless given.
BornCumulant born_cumulant(const HamiltonianFn& h, const Mat& s, const SpectralModel& model, double t,
                           int intervals = 0);

// ---------------------------------------------------------------------------
// Spin-star oracle: system coupled through lambda S (x) sum_i g_i sigma_x^i to N
// bath spins with H_B = sum_i w_i/2 sigma_z^i, bath initially in its Gibbs state.

struct SpinStarBath {
  std::vector<double> frequencies;
  std::vector<double> couplings;
  double beta = kInfiniteBeta;

  int size() const { return static_cast<int>(frequencies.size()); }
  Mat hamiltonian() const;
  Mat coupling_operator() const;  // sum_i g_i sigma_x^i
  Mat gibbs() const;
  static SpinStarBath uniform_band(int n, double center, double spacing, double g, double beta);
};

struct SpinStarModel {
  HamiltonianFn system;
  bool constant = true;
  Mat coupling;
  double lambda = 0.0;
  SpinStarBath bath;
};

EvolutionResult spin_star_oracle(const SpinStarModel& model, const DensityMatrix& rho_s,
                                 const std::vector<double>& times, double rtol = 1e-10);

// Box-broadened spectral function of the spin-star bath: each mode contributes
// 2 pi g_i^2 / Delta_i on a window of its local spacing, at +w_i with weight
// of the ground population and at -w_i with the excited one.
SpectralModel spin_star_spectral_model(const SpinStarBath& bath);

std::vector<double> markovianity_deviation(const EvolutionResult& exact, const EvolutionResult& markov);

// ---------------------------------------------------------------------------
// Markov-validity diagnostics

struct RabiDrive {
  double rabi = 0.0;
  double detuning = 0.0;
};

struct ValidityReport {
  std::vector<double> bohr_frequencies;
  std::vector<double> bohr_gaps;       // |w - w'|, w != w'
  std::vector<double> effective_gaps;  // |w - w' + m Omega|, (w, m) != (w', 0)
  double drive_frequency = 0.0;
  int m_max = 0;
  double min_gap = 0.0;
  double t_floor = 0.0;                // max 1/gap; +inf when a gap closes
  double gate_time = 0.0;
  double band_width = 0.0;             // 1 / gate_time
  std::vector<double> margolus_levitin;  // pi / (2 w) for each positive Bohr frequency
  std::optional<double> rabi_pi_time;
  std::optional<double> rabi_probability;  // transition probability at the gate time
  double factor = 10.0;
  bool markovian_ok = false;
  bool no_markov_generator = false;
};

// Transition frequencies are all E_k - E_l with k, l in distinct levels, or the
// Bohr frequencies of `coupling` when one is supplied.
ValidityReport validity_report(const std::vector<double>& energies, double gate_time, double drive_frequency = 0.0,
                               int m_max = 0, std::optional<RabiDrive> rabi = std::nullopt,
                               const Mat& coupling = Mat(), double factor = -1.0);
ValidityReport validity_report(const FloquetSystem& fs, double gate_time, int m_max,
                               std::optional<RabiDrive> rabi = std::nullopt, double factor = -1.0);

// (rabi / rabi') ^ 2 sin^2(rabi' t / 2), rabi' = sqrt(rabi^2 + detuning^2).
double rabi_probability(double rabi, double detuning, double t);

struct ScalingFit {
  double beta = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  bool non_decaying = false;
  std::vector<double> gate_budget;  // 1 / p per point
};

ScalingFit nonmarkov_scaling_fit(const std::vector<double>& m_values, const std::vector<double>& deviations);

// c eta^k (1 - eta)^(v - k).
double fault_path_bound(double c, double eta, int k, int v);

// ---------------------------------------------------------------------------
// Gate-speed experiment: a qubit whose Hamiltonian w0/2 (cos th Z + sin th X)
// rotates by pi over the gate time tau_g = M / w0 (th = pi t / tau_g, continued
// over the whole window), coupled through Y to a spin-star bath. The exact
// reduced dynamics is compared with the adiabatic Davies prediction built from
// the bath's box-broadened spectral function, at fixed lambda and over a fixed
// window, so that lambda^2 t is matched across M.

struct GateSpeedSetup {
  double omega0 = 1.0;
  int bath_spins = 6;
  double spacing = 0.01;
  double coupling = 1.0;
  double target_rate = 0.002;  // Davies decay rate 2 pi g^2 lambda^2 / spacing
  double window = 200.0;
  int time_points = 201;
  double beta = kInfiniteBeta;

  double lambda() const;
  SpinStarBath bath() const;
};

struct GateSpeedPoint {
  double m = 0.0;
  double gate_time = 0.0;
  double peak_deviation = 0.0;
  double final_deviation = 0.0;
  std::vector<double> times;
  std::vector<double> deviations;
};

GateSpeedPoint gate_speed_point(const GateSpeedSetup& setup, double m);

}  // namespace qmarkov
