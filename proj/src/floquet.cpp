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

#include "qmarkov/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qmarkov/ode.hpp"

namespace qmarkov {

// ---------------------------------------------------------------------------
// PeriodicDrive

PeriodicDrive::PeriodicDrive(Mat h0, double period) : h0_(std::move(h0)), period_(period) {
  if (!(period > 0.0)) throw std::invalid_argument("PeriodicDrive: period must be positive");
  if (!is_hermitian(h0_))
    throw StructuralError("PeriodicDrive: H0 is not Hermitian", hermiticity_deviation(h0_));
}

namespace {

void check_drive_op(const Mat& v, Eigen::Index d) {
  if (v.rows() != d || v.cols() != d) throw std::invalid_argument("PeriodicDrive: drive operator dimension mismatch");
  if (!is_hermitian(v)) throw StructuralError("PeriodicDrive: drive operator is not Hermitian", hermiticity_deviation(v));
}

}  // namespace

PeriodicDrive& PeriodicDrive::add_cos(Mat v, int harmonic, double amplitude) {
  check_drive_op(v, dim());
  terms_.push_back({std::move(v), harmonic, amplitude, Term::Shape::cos, {}});
  return *this;
}

PeriodicDrive& PeriodicDrive::add_sin(Mat v, int harmonic, double amplitude) {
  check_drive_op(v, dim());
  terms_.push_back({std::move(v), harmonic, amplitude, Term::Shape::sin, {}});
  return *this;
}

PeriodicDrive& PeriodicDrive::add_table(Mat v, std::vector<double> samples) {
  check_drive_op(v, dim());
  if (samples.size() < 4) throw std::invalid_argument("PeriodicDrive: tabulated drive needs at least 4 samples");
  terms_.push_back({std::move(v), 1, 1.0, Term::Shape::table, std::move(samples)});
  return *this;
}

double PeriodicDrive::table_value(const Term& term, double t) const {
  const auto n = static_cast<long>(term.table.size());
  double u = std::fmod(t, period_) / period_ * static_cast<double>(n);
  if (u < 0) u += static_cast<double>(n);
  const long k = static_cast<long>(std::floor(u));
  const double s = u - static_cast<double>(k);
  auto at = [&](long i) { return term.table[static_cast<std::size_t>(((i % n) + n) % n)]; };
  const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
  // Catmull-Rom cubic through p1 (s = 0) and p2 (s = 1).
  return p1 + 0.5 * s * (p2 - p0 + s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0)));
}

Mat PeriodicDrive::operator()(double t) const {
  Mat h = h0_;
  const double w = omega();
  for (const auto& term : terms_) {
    double f = 0.0;
    switch (term.shape) {
      case Term::Shape::cos: f = term.amplitude * std::cos(term.harmonic * w * t); break;
      case Term::Shape::sin: f = term.amplitude * std::sin(term.harmonic * w * t); break;
      case Term::Shape::table: f = table_value(term, t); break;
    }
    h += f * term.op;
  }
  return h;
}

HamiltonianFn PeriodicDrive::sampler() const {
  return [self = *this](double t) { return self(t); };
}

double PeriodicDrive::norm_bound() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(h0_, Eigen::EigenvaluesOnly);
  double b = es.eigenvalues().cwiseAbs().maxCoeff();
  for (const auto& term : terms_) {
    Eigen::SelfAdjointEigenSolver<Mat> ev(term.op, Eigen::EigenvaluesOnly);
    double amp = std::abs(term.amplitude);
    if (term.shape == Term::Shape::table)
      for (double x : term.table) amp = std::max(amp, std::abs(x));
    b += amp * ev.eigenvalues().cwiseAbs().maxCoeff();
  }
  return b;
}

double PeriodicDrive::fastest_rate() const {
  double r = norm_bound();
  for (const auto& term : terms_) {
    const double m = term.shape == Term::Shape::table ? static_cast<double>(term.table.size()) / 2.0
                                                      : std::abs(term.harmonic);
    r = std::max(r, m * omega());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Propagator

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kNodeA = 0.5 - kSqrt3 / 6.0;
const double kNodeB = 0.5 + kSqrt3 / 6.0;
const double kWeightBig = (3.0 + 2.0 * kSqrt3) / 12.0;
const double kWeightSmall = (3.0 - 2.0 * kSqrt3) / 12.0;

Mat matrix_power(const Mat& f, long n) {
  Mat result = identity(f.rows());
  Mat base = f;
  while (n > 0) {
    if (n & 1) result = (result * base).eval();
    base = (base * base).eval();
    n >>= 1;
  }
  return result;
}

}  // namespace

Propagator::Propagator(HamiltonianFn h, double span, bool periodic, const PropagatorOptions& options)
    : h_(std::move(h)), span_(span), periodic_(periodic) {
  if (!(span > 0.0)) throw std::invalid_argument("Propagator: time span must be positive");
  if (options.initial_steps < 1) throw std::invalid_argument("Propagator: initial_steps must be positive");
  int n = options.initial_steps;
  std::vector<Mat> grid;
  Mat prev = tabulate(n, &grid);
  refinement_change_ = std::numeric_limits<double>::infinity();
  while (2 * n <= options.max_steps) {
    std::vector<Mat> finer;
    Mat next = tabulate(2 * n, &finer);
    refinement_change_ = (next - prev).norm();
    n *= 2;
    grid.swap(finer);
    prev = next;
    if (refinement_change_ <= options.tol) {
      converged_ = true;
      break;
    }
  }
  grid_ = std::move(grid);
}

Propagator Propagator::periodic(HamiltonianFn h, double period, const PropagatorOptions& options) {
  return Propagator(std::move(h), period, true, options);
}

Propagator Propagator::window(HamiltonianFn h, double t_max, const PropagatorOptions& options) {
  return Propagator(std::move(h), t_max, false, options);
}

Mat Propagator::step(double t0, double dt) const {
  const Mat h1 = h_(t0 + kNodeA * dt);
  const Mat h2 = h_(t0 + kNodeB * dt);
  // Fourth-order commutator-free Magnus step; the first factor applied leans on the earlier node.
  const Mat first = unitary_exp(kWeightBig * h1 + kWeightSmall * h2, dt);
  const Mat second = unitary_exp(kWeightSmall * h1 + kWeightBig * h2, dt);
  return second * first;
}

Mat Propagator::tabulate(int n, std::vector<Mat>* grid) const {
  const double h = span_ / n;
  Mat u = h_(0.0);
  if (u.rows() != u.cols()) throw StructuralError("Propagator: Hamiltonian sampler returned a non-square matrix", 0.0);
  u = identity(u.rows());
  if (grid) {
    grid->clear();
    grid->reserve(static_cast<std::size_t>(n) + 1);
    grid->push_back(u);
  }
  for (int k = 0; k < n; ++k) {
    u = (step(k * h, h) * u).eval();
    if (grid) grid->push_back(u);
  }
  return u;
}

Mat Propagator::at(double t) const {
  if (t < 0.0) throw std::invalid_argument("Propagator: negative time");
  long periods = 0;
  double tau = t;
  if (periodic_) {
    periods = static_cast<long>(std::floor(t / span_));
    tau = t - static_cast<double>(periods) * span_;
    if (tau >= span_) {
      tau -= span_;
      ++periods;
    }
    if (tau < 0.0) tau = 0.0;
  } else if (t > span_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("Propagator: time beyond the tabulated window");
  }
  const int n = steps();
  const double h = span_ / n;
  int k = std::min(static_cast<int>(std::floor(tau / h)), n);
  Mat u = grid_[static_cast<std::size_t>(k)];
  const double rest = tau - k * h;
  if (rest > 1e-15 * span_) u = (step(k * h, rest) * u).eval();
  if (periods > 0) u = (u * matrix_power(grid_.back(), periods)).eval();
  return u;
}

Mat Propagator::operator()(double t, double s) const {
  if (t < s) throw std::invalid_argument("Propagator: requires t >= s");
  return at(t) * at(s).adjoint();
}

// ---------------------------------------------------------------------------
// Floquet analysis

Vec FloquetSystem::fourier_component(Eigen::Index alpha, int q) const {
  if (std::abs(q) > q_max) return Vec::Zero(dim());
  return fourier[static_cast<std::size_t>(alpha)].col(q + q_max);
}

Vec FloquetSystem::evolved_mode(Eigen::Index alpha, double t) const {
  Vec g = Vec::Zero(dim());
  for (int q = -q_max; q <= q_max; ++q)
    g += fourier[static_cast<std::size_t>(alpha)].col(q + q_max) * std::exp(-kI * (q * omega * t));
  return std::exp(-kI * (quasienergies(alpha) * t)) * g;
}

FloquetSystem floquet_analyze(const HamiltonianFn& h, double period, const FloquetOptions& options) {
  if (options.samples < 64) throw std::invalid_argument("floquet_analyze: need at least 64 samples per period");
  FloquetSystem fs;
  fs.period = period;
  fs.omega = 2.0 * kPi / period;
  fs.propagator = std::make_shared<const Propagator>(Propagator::periodic(h, period, options.propagator));
  fs.monodromy = fs.propagator->monodromy();
  const Eigen::Index d = fs.monodromy.rows();
  const double big = fs.omega;

  Eigen::ComplexSchur<Mat> schur(fs.monodromy);
  const Mat& tri = schur.matrixT();
  const Mat& q = schur.matrixU();
  std::vector<double> eps(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) {
    double e = -std::arg(tri(a, a)) / period;
    if (e <= -0.5 * big + 1e-12 * big) e += big;
    eps[static_cast<std::size_t>(a)] = e;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return eps[static_cast<std::size_t>(a)] < eps[static_cast<std::size_t>(b)]; });
  fs.quasienergies.resize(d);
  fs.modes.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    fs.quasienergies(a) = eps[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])];
    fs.modes.col(a) = q.col(order[static_cast<std::size_t>(a)]);
  }
  const double dtol = 1e-9 * big;
  for (Eigen::Index a = 0; a + 1 < d; ++a)
    if (fs.quasienergies(a + 1) - fs.quasienergies(a) < dtol) fs.degenerate = true;
  if (d > 1 && fs.quasienergies(0) + big - fs.quasienergies(d - 1) < dtol) fs.degenerate = true;

  // Fourier components of the periodic part g_alpha(t) = e^{i eps t} U(t,0) |phi_alpha>.
  int ns = 64;
  while (ns < options.samples) ns *= 2;
  std::vector<Mat> coeffs;  // coeffs[alpha].col(q + ns/2)
  for (;;) {
    std::vector<Mat> g(static_cast<std::size_t>(d), Mat(d, ns));
    for (int j = 0; j < ns; ++j) {
      const double t = period * j / ns;
      const Mat ut = fs.propagator->at(t) * fs.modes;
      for (Eigen::Index a = 0; a < d; ++a)
        g[static_cast<std::size_t>(a)].col(j) = std::exp(kI * (fs.quasienergies(a) * t)) * ut.col(a);
    }
    const int half = ns / 2;
    coeffs.assign(static_cast<std::size_t>(d), Mat::Zero(d, 2 * half + 1));
    for (int qq = -half + 1; qq < half; ++qq) {
      Vec phase(ns);
      for (int j = 0; j < ns; ++j) phase(j) = std::exp(kI * (2.0 * kPi * qq * j / ns));
      for (Eigen::Index a = 0; a < d; ++a)
        coeffs[static_cast<std::size_t>(a)].col(qq + half) = g[static_cast<std::size_t>(a)] * phase / static_cast<double>(ns);
    }
    double tail = 0.0;
    for (Eigen::Index a = 0; a < d; ++a)
      for (int qq = -half + 1; qq < half; ++qq)
        if (std::abs(qq) > half / 2) tail = std::max(tail, coeffs[static_cast<std::size_t>(a)].col(qq + half).norm());
    if (tail < 0.1 * options.weight_tol || ns >= 2048) break;
    ns *= 2;
  }
  fs.fourier_samples = ns;
  const int half = ns / 2;
  // Smallest q_max whose discarded weight (sum of norms beyond it) is below tolerance.
  int qmax = half - 1;
  double discarded = 0.0;
  while (qmax > 0) {
    double extra = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
      double w = coeffs[static_cast<std::size_t>(a)].col(qmax + half).norm() +
                 coeffs[static_cast<std::size_t>(a)].col(-qmax + half).norm();
      extra = std::max(extra, w);
    }
    if (discarded + extra >= options.weight_tol) break;
    discarded += extra;
    --qmax;
  }
  if (qmax > options.q_cap) {
    for (int qq = options.q_cap + 1; qq <= qmax; ++qq) {
      double extra = 0.0;
      for (Eigen::Index a = 0; a < d; ++a)
        extra = std::max(extra, coeffs[static_cast<std::size_t>(a)].col(qq + half).norm() +
                                    coeffs[static_cast<std::size_t>(a)].col(-qq + half).norm());
      discarded += extra;
    }
    qmax = options.q_cap;
  }
  fs.q_max = qmax;
  fs.discarded_weight = discarded;
  fs.fourier.resize(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a)
    fs.fourier[static_cast<std::size_t>(a)] = coeffs[static_cast<std::size_t>(a)].middleCols(half - qmax, 2 * qmax + 1);
  return fs;
}

// ---------------------------------------------------------------------------
// Harmonic operators

Mat HarmonicOperators::reconstruct(double t) const {
  if (components.empty()) return Mat();
  Mat s = Mat::Zero(components.front().op.rows(), components.front().op.cols());
  for (const auto& c : components)
    s += std::exp(kI * (kHarmonicSign * c.effective_frequency(big_omega) * t)) * c.op;
  return s;
}

std::size_t HarmonicOperators::harmonic_count() const {
  std::vector<int> qs;
  for (const auto& c : components) qs.push_back(c.q);
  std::sort(qs.begin(), qs.end());
  return static_cast<std::size_t>(std::unique(qs.begin(), qs.end()) - qs.begin());
}

HarmonicOperators harmonic_operators(const FloquetSystem& fs, const Mat& s) {
  const Eigen::Index d = fs.dim();
  if (s.rows() != d || s.cols() != d) throw std::invalid_argument("harmonic_operators: coupling dimension mismatch");
  const int qm = fs.q_max;
  const int width = 2 * qm + 1;

  std::vector<double> diffs;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) diffs.push_back(fs.quasienergies(a) - fs.quasienergies(b));
  std::vector<double> centers;
  const auto label = cluster_values(diffs, Tolerances::defaults().cluster * (1.0 + fs.omega), centers);

  std::map<std::pair<int, std::size_t>, Mat> cells;
  for (Eigen::Index b = 0; b < d; ++b) {
    const Mat sphi = s * fs.fourier[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < d; ++a) {
      // m(i, j) = <phi_a(i - qm)| S |phi_b(j - qm)>; summing the diagonal i - j = q over p gives the coefficient.
      const Mat m = fs.fourier[static_cast<std::size_t>(a)].adjoint() * sphi;
      const Mat ket_bra = fs.modes.col(a) * fs.modes.col(b).adjoint();
      const std::size_t w = label[static_cast<std::size_t>(a * d + b)];
      for (int qq = -2 * qm; qq <= 2 * qm; ++qq) {
        cplx c = 0.0;
        for (int j = std::max(0, -qq); j < width && j + qq < width; ++j) c += m(j + qq, j);
        if (c == cplx(0.0)) continue;
        auto it = cells.find({qq, w});
        if (it == cells.end()) it = cells.emplace(std::make_pair(qq, w), Mat::Zero(d, d)).first;
        it->second += c * ket_bra;
      }
    }
  }
  HarmonicOperators out;
  out.big_omega = fs.omega;
  const double floor = 1e-14 * (1.0 + s.norm());
  for (auto& [key, op] : cells) {
    if (op.norm() <= floor) continue;
    out.components.push_back({key.first, centers[key.second], std::move(op)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periodic generator

LindbladGenerator periodic_generator(const FloquetSystem& fs, const std::vector<Coupling>& couplings,
                                     const SpectralModel& model) {
  const Eigen::Index d = fs.dim();
  const auto n = static_cast<Eigen::Index>(couplings.size());
  if (n == 0) return LindbladGenerator(Mat::Zero(d, d), {});
  SpectralModel rhat = model;
  if (model.kind() != SpectralKind::matrix) rhat = SpectralModel::diagonal(std::vector<SpectralModel>(static_cast<std::size_t>(n), model));
  if (rhat.channels() != n)
    throw std::invalid_argument("periodic_generator: spectral matrix has " + std::to_string(rhat.channels()) +
                                " channels but " + std::to_string(n) + " couplings were given");

  struct Piece {
    double x;
    Eigen::Index channel;
    const Mat* op;
  };
  std::vector<HarmonicOperators> harmonics;
  harmonics.reserve(static_cast<std::size_t>(n));
  for (const auto& c : couplings) {
    if (!is_hermitian(c.op))
      throw StructuralError("periodic_generator: coupling operator is not Hermitian", hermiticity_deviation(c.op));
    harmonics.push_back(harmonic_operators(fs, c.lambda * c.op));
  }
  std::vector<Piece> pieces;
  std::vector<double> xs;
  for (Eigen::Index k = 0; k < n; ++k)
    for (const auto& comp : harmonics[static_cast<std::size_t>(k)].components) {
      pieces.push_back({comp.effective_frequency(fs.omega), k, &comp.op});
      xs.push_back(pieces.back().x);
    }
  std::vector<double> centers;
  const auto label = cluster_values(xs, Tolerances::defaults().cluster * (1.0 + fs.omega), centers);

  std::vector<std::vector<Mat>> grouped(centers.size(), std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(d, d)));
  for (std::size_t i = 0; i < pieces.size(); ++i)
    grouped[label[i]][static_cast<std::size_t>(pieces[i].channel)] += *pieces[i].op;

  const double btol = Tolerances::defaults().bochner;
  std::vector<LindbladTerm> terms;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double x = centers[c];
    Mat r = rhat.matrix_value(x);
    if (!is_hermitian(r, 1e-10))
      throw StructuralError("periodic_generator: spectral matrix is not Hermitian at x = " + std::to_string(x),
                            hermiticity_deviation(r));
    r = (0.5 * (r + r.adjoint())).eval();
    const EigenSystem es = hermitian_eig(r);
    const double scale = 1.0 + es.values.cwiseAbs().maxCoeff();
    if (es.values(0) < -btol * scale) throw BochnerViolation(x, es.values(0), "periodic_generator spectral matrix");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mu = es.values(j);
      if (mu <= btol * scale) continue;
      Mat v = Mat::Zero(d, d);
      for (Eigen::Index l = 0; l < n; ++l) v += std::conj(es.vectors(l, j)) * grouped[c][static_cast<std::size_t>(l)];
      if (v.norm() == 0.0) continue;
      terms.push_back({mu, std::move(v), -x});
    }
  }
  return LindbladGenerator(Mat::Zero(d, d), std::move(terms));
}

double floquet_covariance_defect(const LindbladGenerator& gen, const Mat& monodromy) {
  const Mat f = unitary_superop(monodromy);
  const Mat& l = gen.dissipator().matrix();
  return (f * l - l * f).norm();
}

Mat covariant_propagator(const FloquetSystem& fs, const LindbladGenerator& gen, double t, double s) {
  if (t < s) throw std::invalid_argument("covariant_propagate: requires t >= s");
  const Mat us = unitary_superop(fs.propagator->at(s));
  const Mat uts = unitary_superop((*fs.propagator)(t, s));
  const Mat e = matrix_exp(gen.superop().matrix() * (t - s));
  return uts * us * e * us.adjoint();
}

DensityMatrix covariant_propagate(const FloquetSystem& fs, const LindbladGenerator& gen, const DensityMatrix& rho0,
                                  double t, double s) {
  const Mat out = unvec(covariant_propagator(fs, gen, t, s) * vec(rho0.matrix()), fs.dim());
  return DensityMatrix(0.5 * (out + out.adjoint()), 1e-7);
}

Mat covariant_reference(const FloquetSystem& fs, const LindbladGenerator& gen, const Mat& rho0, double t, double s,
                        double rtol) {
  if (t < s) throw std::invalid_argument("covariant_reference: requires t >= s");
  const Eigen::Index d = fs.dim();
  const Eigen::Index dd = d * d;
  const HamiltonianFn& h = fs.propagator->hamiltonian();
  const Mat& l = gen.superop().matrix();
  Vec y(2 * dd);
  y.head(dd) = vec(fs.propagator->at(s));
  y.tail(dd) = vec(rho0);
  auto rhs = [&](double tt, const Vec& yy, Vec& dy) {
    const Mat u = unvec(yy.head(dd), d);
    const Mat rho = unvec(yy.tail(dd), d);
    const Mat ht = h(tt);
    const Mat frame = unvec(l * vec(u.adjoint() * rho * u), d);
    dy.resize(2 * dd);
    dy.head(dd) = vec(-kI * ht * u);
    dy.tail(dd) = vec(-kI * (ht * rho - rho * ht) + u * frame * u.adjoint());
  };
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = rtol * 1e-2;
  const auto sol = integrate_ode(rhs, y, {s, t}, opts);
  return unvec(sol.back().tail(dd), d);
}

FloquetSteadyState floquet_steady_state(const FloquetSystem& fs, const LindbladGenerator& gen, int periods) {
  FloquetSteadyState out;
  const Mat& l = gen.superop().matrix();
  const Eigen::Index d = fs.dim();
  out.frame_state = stationary_state(gen.superop());
  const Mat in_basis = fs.modes.adjoint() * out.frame_state * fs.modes;
  out.floquet_populations = in_basis.diagonal().real();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) out.floquet_coherence = std::max(out.floquet_coherence, std::abs(in_basis(i, j)));
  if (periods <= 0) {
    Eigen::ComplexEigenSolver<Mat> ev(l, false);
    const double scale = 1e-10 * (1.0 + l.norm());
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.eigenvalues().size(); ++i) {
      const double re = std::abs(ev.eigenvalues()(i).real());
      if (re > scale) gap = std::min(gap, re);
    }
    periods = std::isinf(gap) ? 1 : static_cast<int>(std::min(1e6, std::ceil(40.0 / (gap * fs.period))));
  }
  out.periods = periods;
  const Mat mixed = identity(d) / static_cast<double>(d);
  const Mat e = matrix_exp(l * (periods * fs.period));
  const Mat frame = unvec(e * vec(mixed), d);
  const Mat f = matrix_power(fs.monodromy, periods);
  out.stroboscopic_state = f * frame * f.adjoint();
  out.frame_vs_stroboscopic = trace_distance(out.stroboscopic_state, out.frame_state);
  return out;
}

}  // namespace qmarkov
