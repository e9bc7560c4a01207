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

#include "qmarkov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmarkov/ode.hpp"

namespace qmarkov {

std::vector<double> uniform_grid(double t_final, int points) {
  if (points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
  if (!(t_final > 0.0)) throw std::invalid_argument("uniform_grid: final time must be positive");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = t_final * i / (points - 1);
  return g;
}

namespace {

void finish_trajectory(EvolutionResult& r) {
  r.max_trace_drift = 0.0;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    Mat& rho = r.states[i];
    rho = (0.5 * (rho + rho.adjoint())).eval();
    r.max_trace_drift = std::max(r.max_trace_drift, std::abs(rho.trace() - cplx(1.0)));
    const double lo = min_eigenvalue(rho);
    r.min_eigenvalue = std::min(r.min_eigenvalue, lo);
    if (lo < -1e-6) {
      std::ostringstream os;
      os << "evolution lost positivity at t = " << r.times[i] << " (minimum eigenvalue " << lo << ")";
      throw Error(os.str());
    }
  }
}

}  // namespace

EvolutionResult lindblad_evolve(const SuperopFn& gen, const DensityMatrix& rho0, const std::vector<double>& times,
                                double rtol) {
  const Eigen::Index d = rho0.dim();
  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    const Mat l = gen(t);
    if (l.rows() != d * d) throw std::invalid_argument("lindblad_evolve: generator dimension mismatch");
    dy = l * y;
  };
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = rtol * 1e-3;
  EvolutionResult r;
  r.times = times;
  r.rtol = rtol;
  r.method = "dopri5";
  const auto sol = integrate_ode(rhs, vec(rho0.matrix()), times, opts, &r.steps);
  for (const auto& y : sol) r.states.push_back(unvec(y, d));
  finish_trajectory(r);
  return r;
}

EvolutionResult lindblad_evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                const std::vector<double>& times, double rtol) {
  if (gen.dim() != rho0.dim()) throw std::invalid_argument("lindblad_evolve: state and generator dimensions differ");
  const Mat l = gen.superop().matrix();
  return lindblad_evolve([&l](double) { return l; }, rho0, times, rtol);
}

EvolutionResult adiabatic_davies_evolve(const HamiltonianFn& h, const std::vector<Coupling>& couplings,
                                        const SpectralModel& model, const DensityMatrix& rho0,
                                        const std::vector<double>& times, const DaviesOptions& options,
                                        double rtol) {
  auto gen = [&](double t) { return davies_generator(h(t), couplings, model, options).superop().matrix(); };
  auto r = lindblad_evolve(gen, rho0, times, rtol);
  r.method = "dopri5/adiabatic-davies";
  return r;
}

// ---------------------------------------------------------------------------
// Born cumulant

Superoperator BornCumulant::dissipative() const {
  return Superoperator(full.dim(), full.matrix() - hamiltonian_superop(lamb_shift));
}

namespace {

std::vector<double> simpson_weights(int n, double h) {
  std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i <= n; ++i) w[static_cast<std::size_t>(i)] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (auto& x : w) x *= h / 3.0;
  return w;
}

// Weights for int_0^{i h} on nodes 0..i (fourth order except i = 1).
std::vector<double> inner_weights(int i, double h) {
  std::vector<double> w(static_cast<std::size_t>(i) + 1, 0.0);
  if (i == 0) return w;
  if (i == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  int simpson_end = (i % 2 == 0) ? i : i - 3;
  if (simpson_end > 0) {
    auto s = simpson_weights(simpson_end, h);
    for (int j = 0; j <= simpson_end; ++j) w[static_cast<std::size_t>(j)] += s[static_cast<std::size_t>(j)];
  }
  if (i % 2 == 1) {
    const double c = 3.0 * h / 8.0;
    w[static_cast<std::size_t>(i - 3)] += c;
    w[static_cast<std::size_t>(i - 2)] += 3.0 * c;
    w[static_cast<std::size_t>(i - 1)] += 3.0 * c;
    w[static_cast<std::size_t>(i)] += c;
  }
  return w;
}

}  // namespace

BornCumulant born_cumulant(const HamiltonianFn& h, const Mat& s, const CorrelationFn& f, double t, int intervals) {
  if (!is_hermitian(s)) throw StructuralError("born_cumulant: coupling is not Hermitian", hermiticity_deviation(s));
  if (t < 0.0) throw std::invalid_argument("born_cumulant: negative time");
  const Eigen::Index d = s.rows();
  BornCumulant out;
  out.t = t;
  if (t == 0.0) {
    out.full = Superoperator::zero(d);
    out.lamb_shift = Mat::Zero(d, d);
    return out;
  }
  int n = std::max(intervals, 4);
  if (n % 2) ++n;
  out.intervals = n;
  const double step = t / n;

  PropagatorOptions popts;
  popts.initial_steps = std::max(16, n / 8);
  const Propagator prop = Propagator::window(h, t, popts);
  std::vector<Mat> sn(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const Mat u = prop.at(std::min(t, i * step));
    sn[static_cast<std::size_t>(i)] = u.adjoint() * s * u;
  }
  std::vector<cplx> fv(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) fv[static_cast<std::size_t>(m)] = f(m * step);
  auto fm = [&](int m) { return m >= 0 ? fv[static_cast<std::size_t>(m)] : std::conj(fv[static_cast<std::size_t>(-m)]); };

  const auto w = simpson_weights(n, step);
  Mat jump = Mat::Zero(d * d, d * d);
  Mat c = Mat::Zero(d, d);
  for (int i = 0; i <= n; ++i) {
    Mat b = Mat::Zero(d, d);
    for (int j = 0; j <= n; ++j) b += (w[static_cast<std::size_t>(j)] * fm(j - i)) * sn[static_cast<std::size_t>(j)];
    jump += w[static_cast<std::size_t>(i)] * sandwich(sn[static_cast<std::size_t>(i)], b);
    const auto iw = inner_weights(i, step);
    Mat inner = Mat::Zero(d, d);
    for (int j = 0; j <= i; ++j) inner += (iw[static_cast<std::size_t>(j)] * fm(i - j)) * sn[static_cast<std::size_t>(j)];
    c += w[static_cast<std::size_t>(i)] * sn[static_cast<std::size_t>(i)] * inner;
  }
  out.full = Superoperator(d, jump - spre(c) - spost(c.adjoint()));
  out.lamb_shift = (c - c.adjoint()) / (2.0 * kI);
  return out;
}

BornCumulant born_cumulant(const HamiltonianFn& h, const Mat& s, const SpectralModel& model, double t,
                           int intervals) {
  if (intervals <= 0) {
    const double hnorm = hermitian_eig(h(0.0)).values.cwiseAbs().maxCoeff();
    const double fastest = model.cutoff() + 2.0 * hnorm;
    const double target = kPi / (8.0 * fastest);
    intervals = static_cast<int>(std::ceil(t / target));
    intervals = std::clamp(intervals, 16, 40000);
  }
  return born_cumulant(h, s, [&model](double tau) { return correlation_function(model, tau); }, t, intervals);
}

// ---------------------------------------------------------------------------
// Spin-star oracle

Mat SpinStarBath::hamiltonian() const {
  const int n = size();
  Mat h = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  for (int i = 0; i < n; ++i) h += 0.5 * frequencies[static_cast<std::size_t>(i)] * qubit_site_op(pauli_z(), i, n);
  return h;
}

Mat SpinStarBath::coupling_operator() const {
  const int n = size();
  Mat r = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  for (int i = 0; i < n; ++i) r += couplings[static_cast<std::size_t>(i)] * qubit_site_op(pauli_x(), i, n);
  return r;
}

Mat SpinStarBath::gibbs() const {
  std::vector<Mat> factors;
  for (double w : frequencies) factors.push_back(gibbs_state(0.5 * w * pauli_z(), beta));
  return kron(factors);
}

SpinStarBath SpinStarBath::uniform_band(int n, double center, double spacing, double g, double beta) {
  if (n < 1) throw std::invalid_argument("spin-star bath needs at least one spin");
  SpinStarBath b;
  b.beta = beta;
  for (int i = 0; i < n; ++i) {
    b.frequencies.push_back(center + (i - 0.5 * (n - 1)) * spacing);
    b.couplings.push_back(g);
  }
  return b;
}

EvolutionResult spin_star_oracle(const SpinStarModel& model, const DensityMatrix& rho_s,
                                 const std::vector<double>& times, double rtol) {
  const SpinStarBath& bath = model.bath;
  if (bath.frequencies.size() != bath.couplings.size())
    throw std::invalid_argument("spin_star_oracle: frequency and coupling lists differ in length");
  const Eigen::Index d = rho_s.dim();
  const Eigen::Index db = Eigen::Index(1) << bath.size();
  if (d * db > 1024) throw std::invalid_argument("spin_star_oracle: total dimension exceeds 1024");
  if (model.coupling.rows() != d || !is_hermitian(model.coupling))
    throw std::invalid_argument("spin_star_oracle: coupling must be a Hermitian operator on the system");

  const Mat hconst = kron(identity(d), bath.hamiltonian()) + model.lambda * kron(model.coupling, bath.coupling_operator());

  // Pure-state ensemble: eigenvectors of rho_S times bath computational basis states.
  const EigenSystem sys = hermitian_eig(rho_s.matrix());
  const Mat rb = bath.gibbs();
  std::vector<std::pair<double, Vec>> ensemble;
  double wmax = 0.0;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < db; ++b) wmax = std::max(wmax, sys.values(a) * std::real(rb(b, b)));
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < db; ++b) {
      const double wgt = sys.values(a) * std::real(rb(b, b));
      if (wgt <= 1e-14 * wmax) continue;
      ensemble.emplace_back(wgt, kron(sys.vectors.col(a), basis_ket(db, b)));
    }

  EvolutionResult r;
  r.times = times;
  r.rtol = rtol;
  r.states.assign(times.size(), Mat::Zero(d, d));
  auto accumulate = [&](std::size_t k, double wgt, const Vec& psi) {
    Eigen::Map<const Mat> m(psi.data(), db, d);
    r.states[k] += wgt * (m.transpose() * m.conjugate());
  };

  if (model.constant) {
    r.method = "eigendecomposition";
    const Mat htot = hconst + kron(model.system(0.0), identity(db));
    const EigenSystem es = hermitian_eig(htot);
    for (const auto& [wgt, psi] : ensemble) {
      const Vec c = es.vectors.adjoint() * psi;
      for (std::size_t k = 0; k < times.size(); ++k) {
        const Vec phase = (-kI * es.values.cast<cplx>() * times[k]).array().exp();
        accumulate(k, wgt, es.vectors * (phase.array() * c.array()).matrix());
      }
    }
  } else {
    r.method = "dopri5/state-vector";
    auto rhs = [&](double t, const Vec& y, Vec& dy) {
      const Mat hs = model.system(t);
      dy = hconst * y;
      Eigen::Map<const Mat> m(y.data(), db, d);
      Eigen::Map<Mat> dm(dy.data(), db, d);
      dm.noalias() += m * hs.transpose();
      dy *= -kI;
    };
    OdeOptions opts;
    opts.rtol = rtol;
    opts.atol = rtol * 1e-2;
    for (const auto& [wgt, psi] : ensemble) {
      std::size_t steps = 0;
      const auto sol = integrate_ode(rhs, psi, times, opts, &steps);
      r.steps += steps;
      for (std::size_t k = 0; k < times.size(); ++k) accumulate(k, wgt, sol[k]);
    }
  }
  finish_trajectory(r);
  return r;
}

SpectralModel spin_star_spectral_model(const SpinStarBath& bath) {
  const int n = bath.size();
  if (n < 2) throw std::invalid_argument("spin_star_spectral_model: need at least two bath spins to define a band");
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return bath.frequencies[a] < bath.frequencies[b]; });
  std::vector<double> w, g;
  for (auto i : order) {
    w.push_back(bath.frequencies[i]);
    g.push_back(bath.couplings[i]);
  }
  std::vector<double> edges(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i < n; ++i) edges[static_cast<std::size_t>(i)] = 0.5 * (w[static_cast<std::size_t>(i - 1)] + w[static_cast<std::size_t>(i)]);
  edges[0] = w[0] - (edges[1] - w[0]);
  edges[static_cast<std::size_t>(n)] = w.back() + (w.back() - edges[static_cast<std::size_t>(n - 1)]);
  if (!(edges[0] > 0.0)) throw std::invalid_argument("spin_star_spectral_model: band must lie at positive frequencies");

  std::vector<double> height(static_cast<std::size_t>(n)), emit(static_cast<std::size_t>(n)), absorb(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    height[k] = 2.0 * kPi * g[k] * g[k] / (edges[k + 1] - edges[k]);
    const double boltz = std::isinf(bath.beta) ? 0.0 : std::exp(-bath.beta * w[k]);
    emit[k] = height[k] / (1.0 + boltz);
    absorb[k] = height[k] * boltz / (1.0 + boltz);
  }
  const double eps = 1e-9 * (edges.back() - edges.front());
  std::vector<double> xs, ys;
  // Negative side (system absorbs from the bath), ascending.
  xs.push_back(-edges[static_cast<std::size_t>(n)] - eps);
  ys.push_back(0.0);
  for (int i = n - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    xs.push_back(-edges[k + 1] + eps);
    ys.push_back(absorb[k]);
    xs.push_back(-edges[k] - eps);
    ys.push_back(absorb[k]);
  }
  xs.push_back(-edges[0] + eps);
  ys.push_back(0.0);
  xs.push_back(edges[0] - eps);
  ys.push_back(0.0);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    xs.push_back(edges[k] + eps);
    ys.push_back(emit[k]);
    xs.push_back(edges[k + 1] - eps);
    ys.push_back(emit[k]);
  }
  xs.push_back(edges[static_cast<std::size_t>(n)] + eps);
  ys.push_back(0.0);
  return SpectralModel::tabulated(std::move(xs), std::move(ys), bath.beta);
}

std::vector<double> markovianity_deviation(const EvolutionResult& exact, const EvolutionResult& markov) {
  if (exact.states.size() != markov.states.size())
    throw std::invalid_argument("markovianity_deviation: trajectories have different lengths");
  std::vector<double> out;
  out.reserve(exact.states.size());
  for (std::size_t i = 0; i < exact.states.size(); ++i) {
    if (i < exact.times.size() && i < markov.times.size() &&
        std::abs(exact.times[i] - markov.times[i]) > 1e-9 * (1.0 + std::abs(exact.times[i])))
      throw std::invalid_argument("markovianity_deviation: time grids differ");
    out.push_back(trace_distance(exact.states[i], markov.states[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validity diagnostics

double rabi_probability(double rabi, double detuning, double t) {
  const double gen = std::sqrt(rabi * rabi + detuning * detuning);
  if (gen == 0.0) return 0.0;
  const double s = std::sin(0.5 * gen * t);
  return (rabi / gen) * (rabi / gen) * s * s;
}

namespace {

ValidityReport build_report(std::vector<double> freqs, double gate_time, double drive, int m_max,
                            std::optional<RabiDrive> rabi, double factor, double tol) {
  if (!(gate_time > 0.0)) throw std::invalid_argument("validity_report: gate time must be positive");
  if (m_max < 0) throw std::invalid_argument("validity_report: m_max must be non-negative");
  if (drive <= 0.0) m_max = 0;
  ValidityReport r;
  std::vector<double> centers;
  cluster_values(freqs, tol, centers);
  r.bohr_frequencies = centers;
  r.drive_frequency = drive;
  r.m_max = m_max;
  r.gate_time = gate_time;
  r.band_width = 1.0 / gate_time;
  r.factor = factor < 0.0 ? Tolerances::defaults().markov_factor : factor;
  const auto& w = r.bohr_frequencies;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) r.bohr_gaps.push_back(std::abs(w[i] - w[j]));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      for (int m = -m_max; m <= m_max; ++m) {
        if (i == j && m == 0) continue;
        r.effective_gaps.push_back(std::abs(w[i] - w[j] + m * drive));
      }
  std::sort(r.bohr_gaps.begin(), r.bohr_gaps.end());
  std::sort(r.effective_gaps.begin(), r.effective_gaps.end());
  if (r.effective_gaps.empty()) {
    r.min_gap = std::numeric_limits<double>::infinity();
    r.t_floor = 0.0;
  } else {
    r.min_gap = r.effective_gaps.front();
    r.t_floor = r.min_gap < 1e-9 ? std::numeric_limits<double>::infinity() : 1.0 / r.min_gap;
  }
  r.no_markov_generator = std::isinf(r.t_floor);
  for (double x : w)
    if (x > tol) r.margolus_levitin.push_back(kPi / (2.0 * x));
  if (rabi) {
    const double gen = std::hypot(rabi->rabi, rabi->detuning);
    r.rabi_pi_time = gen > 0.0 ? kPi / gen : std::numeric_limits<double>::infinity();
    r.rabi_probability = rabi_probability(rabi->rabi, rabi->detuning, gate_time);
  }
  r.markovian_ok = !r.no_markov_generator && gate_time >= r.factor * r.t_floor;
  return r;
}

}  // namespace

ValidityReport validity_report(const std::vector<double>& energies, double gate_time, double drive_frequency,
                               int m_max, std::optional<RabiDrive> rabi, const Mat& coupling, double factor) {
  if (energies.empty()) throw std::invalid_argument("validity_report: empty spectrum");
  const double scale = 1.0 + std::abs(*std::max_element(energies.begin(), energies.end(),
                                                        [](double a, double b) { return std::abs(a) < std::abs(b); }));
  const double tol = Tolerances::defaults().cluster * scale;
  std::vector<double> freqs;
  if (coupling.size() > 0) {
    RVec e = Eigen::Map<const RVec>(energies.data(), static_cast<Eigen::Index>(energies.size()));
    const Mat h = e.cast<cplx>().asDiagonal();
    freqs = bohr_decompose(h, coupling).frequencies;
  } else {
    std::vector<double> levels;
    cluster_values(energies, tol, levels);
    for (std::size_t k = 0; k < levels.size(); ++k)
      for (std::size_t l = 0; l < levels.size(); ++l)
        if (k != l) freqs.push_back(levels[k] - levels[l]);
  }
  return build_report(std::move(freqs), gate_time, drive_frequency, m_max, rabi, factor, tol);
}

ValidityReport validity_report(const FloquetSystem& fs, double gate_time, int m_max, std::optional<RabiDrive> rabi,
                               double factor) {
  std::vector<double> freqs;
  const auto d = fs.quasienergies.size();
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) freqs.push_back(fs.quasienergies(a) - fs.quasienergies(b));
  return build_report(std::move(freqs), gate_time, fs.omega, m_max, rabi, factor,
                      Tolerances::defaults().cluster * (1.0 + fs.omega));
}

ScalingFit nonmarkov_scaling_fit(const std::vector<double>& m_values, const std::vector<double>& deviations) {
  if (m_values.size() != deviations.size()) throw std::invalid_argument("nonmarkov_scaling_fit: length mismatch");
  if (m_values.size() < 2) throw std::invalid_argument("nonmarkov_scaling_fit: need at least two points");
  const auto n = static_cast<double>(m_values.size());
  std::vector<double> x, y;
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (!(m_values[i] > 0.0) || !(deviations[i] > 0.0))
      throw std::invalid_argument("nonmarkov_scaling_fit: M and deviations must be positive");
    x.push_back(std::log(m_values[i]));
    y.push_back(std::log(deviations[i]));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("nonmarkov_scaling_fit: all M values are equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  ScalingFit fit;
  fit.beta = -slope;
  fit.prefactor = std::exp(intercept);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res <= 1e-300 ? 1.0 : 0.0);
  fit.non_decaying = fit.beta <= 0.05;
  for (double p : deviations) fit.gate_budget.push_back(1.0 / p);
  return fit;
}

double fault_path_bound(double c, double eta, int k, int v) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("fault_path_bound: eta must lie in [0, 1]");
  if (k < 0 || k > v) throw std::invalid_argument("fault_path_bound: need 0 <= k <= v");
  if (c < 0.0) throw std::invalid_argument("fault_path_bound: c must be non-negative");
  return c * std::pow(eta, k) * std::pow(1.0 - eta, v - k);
}

// ---------------------------------------------------------------------------
// Gate-speed experiment

double GateSpeedSetup::lambda() const {
  return std::sqrt(target_rate * spacing / (2.0 * kPi * coupling * coupling));
}

SpinStarBath GateSpeedSetup::bath() const {
  return SpinStarBath::uniform_band(bath_spins, omega0, spacing, coupling, beta);
}

GateSpeedPoint gate_speed_point(const GateSpeedSetup& setup, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("gate_speed_point: M must be positive");
  GateSpeedPoint pt;
  pt.m = m;
  pt.gate_time = m / setup.omega0;
  const double v = std::isinf(m) ? 0.0 : kPi / pt.gate_time;
  const double w0 = setup.omega0;
  HamiltonianFn h = [w0, v](double t) -> Mat {
    const double th = v * t;
    return 0.5 * w0 * (std::cos(th) * pauli_z() + std::sin(th) * pauli_x());
  };
  const SpinStarBath bath = setup.bath();
  const double lambda = setup.lambda();
  pt.times = uniform_grid(setup.window, setup.time_points);
  const DensityMatrix rho0 = DensityMatrix::pure(basis_ket(2, 1));

  SpinStarModel model{h, v == 0.0, pauli_y(), lambda, bath};
  const auto exact = spin_star_oracle(model, rho0, pt.times);
  const auto markov = adiabatic_davies_evolve(h, {{pauli_y(), lambda}}, spin_star_spectral_model(bath), rho0, pt.times);
  pt.deviations = markovianity_deviation(exact, markov);
  pt.peak_deviation = *std::max_element(pt.deviations.begin(), pt.deviations.end());
  pt.final_deviation = pt.deviations.back();
  return pt;
}

}  // namespace qmarkov
