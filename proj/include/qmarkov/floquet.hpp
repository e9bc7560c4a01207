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

// Periodically driven systems: time-ordered propagators, Floquet analysis,
// harmonic decomposition of interaction-picture couplings and the covariant
// (frame) generator of the periodic weak-coupling limit.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qmarkov/bath.hpp"
#include "qmarkov/core.hpp"
#include "qmarkov/generators.hpp"

namespace qmarkov {

using HamiltonianFn = std::function<Mat(double)>;

// H(t) = H0 + sum_j a_j f_j(m_j Omega t) V_j with f_j in {cos, sin}, or a
// uniformly sampled periodic table interpolated with periodic cubic
// (Catmull-Rom) splines.
class PeriodicDrive {
 public:
  PeriodicDrive(Mat h0, double period);

  PeriodicDrive& add_cos(Mat v, int harmonic, double amplitude);
  PeriodicDrive& add_sin(Mat v, int harmonic, double amplitude);
  // f(t) given at t_k = k * period / n, k = 0..n-1.
  PeriodicDrive& add_table(Mat v, std::vector<double> samples);

  double period() const { return period_; }
  double omega() const { return 2.0 * kPi / period_; }
  Eigen::Index dim() const { return h0_.rows(); }
  Mat operator()(double t) const;
  HamiltonianFn sampler() const;
  // Largest |H(t)| frequency scale: ||H0|| + sum |a_j| ||V_j|| and max m_j Omega.
  double norm_bound() const;
  double fastest_rate() const;

 private:
  struct Term {
    Mat op;
    int harmonic = 1;
    double amplitude = 1.0;
    enum class Shape { cos, sin, table } shape = Shape::cos;
    std::vector<double> table;
  };
  double table_value(const Term& term, double t) const;

  Mat h0_;
  double period_;
  std::vector<Term> terms_;
};

struct PropagatorOptions {
  int initial_steps = 64;    // steps per period (or per window)
  double tol = 1e-10;        // ||F_N - F_2N|| target
  int max_steps = 1 << 16;
};

// Time-ordered propagator U(t,0) tabulated on a uniform grid. Each step is the
// fourth-order commutator-free product of two exponentials of H sampled at the
// Gauss points; the step count doubles until the one-period (or one-window)
// propagator changes by at most `tol`. Between grid points a single partial
// step is taken, and for periodic H, U(t + n Theta, 0) = U(t, 0) F^n.
class Propagator {
 public:
  static Propagator periodic(HamiltonianFn h, double period, const PropagatorOptions& options = {});
  static Propagator window(HamiltonianFn h, double t_max, const PropagatorOptions& options = {});

  Mat at(double t) const;                      // U(t, 0)
  Mat operator()(double t, double s) const;    // U(t, s) = U(t,0) U(s,0)^dag
  const Mat& monodromy() const { return grid_.back(); }  // U(Theta, 0) or U(t_max, 0)

  bool is_periodic() const { return periodic_; }
  double span() const { return span_; }
  int steps() const { return static_cast<int>(grid_.size()) - 1; }
  double refinement_change() const { return refinement_change_; }  // ||F_N - F_{N/2}||
  bool converged() const { return converged_; }
  Eigen::Index dim() const { return grid_.front().rows(); }
  const HamiltonianFn& hamiltonian() const { return h_; }

 private:
  Propagator(HamiltonianFn h, double span, bool periodic, const PropagatorOptions& options);
  Mat step(double t0, double dt) const;
  Mat tabulate(int n, std::vector<Mat>* grid) const;

  HamiltonianFn h_;
  double span_ = 0.0;
  bool periodic_ = false;
  std::vector<Mat> grid_;
  double refinement_change_ = 0.0;
  bool converged_ = false;
};

struct FloquetOptions {
  int samples = 64;            // initial Fourier samples per period (power of two, >= 64)
  double weight_tol = 1e-12;   // discarded harmonic weight
  int q_cap = 128;
  PropagatorOptions propagator;
};

struct FloquetSystem {
  double period = 0.0;
  double omega = 0.0;
  std::shared_ptr<const Propagator> propagator;
  Mat monodromy;
  RVec quasienergies;  // ascending, in (-Omega/2, Omega/2]
  Mat modes;           // columns |phi_alpha> at t = 0
  int q_max = 0;
  std::vector<Mat> fourier;  // fourier[alpha].col(q + q_max) = |phi_alpha(q)>
  bool degenerate = false;
  double discarded_weight = 0.0;
  int fourier_samples = 0;

  Eigen::Index dim() const { return modes.rows(); }
  Vec fourier_component(Eigen::Index alpha, int q) const;
  // e^{-i eps_alpha t} sum_q |phi_alpha(q)> e^{-i q Omega t}.
  Vec evolved_mode(Eigen::Index alpha, double t) const;
};

FloquetSystem floquet_analyze(const HamiltonianFn& h, double period, const FloquetOptions& options = {});

// Reconstruction sign: S(t) = U(t,0)^dag S U(t,0) = sum e^{+i(w + q Omega) t} S(q, w).
inline constexpr int kHarmonicSign = +1;

struct HarmonicComponent {
  int q = 0;
  double omega = 0.0;  // quasi-energy difference eps_alpha - eps_alpha'
  Mat op;
  double effective_frequency(double big_omega) const { return omega + q * big_omega; }
};

struct HarmonicOperators {
  double big_omega = 0.0;
  std::vector<HarmonicComponent> components;

  Mat reconstruct(double t) const;
  std::size_t harmonic_count() const;  // distinct q values present
};

HarmonicOperators harmonic_operators(const FloquetSystem& fs, const Mat& s);

// Frame generator of the periodic weak-coupling limit. Components are grouped
// by effective frequency x = w + q Omega; the spectral matrix Rhat(x) is
// diagonalized and each positive eigenvalue mu_j yields the jump
// sum_l conj(v_jl) lambda_l S_l(x) with rate mu_j. Purely dissipative.
LindbladGenerator periodic_generator(const FloquetSystem& fs, const std::vector<Coupling>& couplings,
                                     const SpectralModel& model);

// || F D - D F ||_F with F = U(Theta,0) (.) U(Theta,0)^dag.
double floquet_covariance_defect(const LindbladGenerator& gen, const Mat& monodromy);

// Lambda(t,s) = U(t,s) e^{(t-s) L(s)}, L(s) = U(s,0) L U(s,0)^dag.
Mat covariant_propagator(const FloquetSystem& fs, const LindbladGenerator& gen, double t, double s);
DensityMatrix covariant_propagate(const FloquetSystem& fs, const LindbladGenerator& gen,
                                  const DensityMatrix& rho0, double t, double s);

// Direct integration of d rho/dt = -i[H(t), rho] + U(t,0) L(U(t,0)^dag rho U(t,0)) U(t,0)^dag
// jointly with dU/dt = -i H U, from rho(s) = rho0.
Mat covariant_reference(const FloquetSystem& fs, const LindbladGenerator& gen, const Mat& rho0, double t,
                        double s, double rtol = 1e-11);

struct FloquetSteadyState {
  Mat frame_state;            // null vector of the frame generator
  RVec floquet_populations;   // diagonal of frame_state in the Floquet basis
  double floquet_coherence = 0.0;  // largest off-diagonal modulus in the Floquet basis
  Mat stroboscopic_state;     // lab-frame state after many periods from the maximally mixed state
  double frame_vs_stroboscopic = 0.0;  // trace distance between the two
  int periods = 0;
};

FloquetSteadyState floquet_steady_state(const FloquetSystem& fs, const LindbladGenerator& gen,
                                        int periods = 0);

}  // namespace qmarkov
