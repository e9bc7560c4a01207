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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qmarkov/bath.hpp"
#include "qmarkov/dynamics.hpp"
#include "qmarkov/floquet.hpp"
#include "qmarkov/generators.hpp"
#include "qmarkov/qec.hpp"

using namespace qmarkov;

namespace {

// Thresholds and runtime limits.
constexpr double kGibbsTol = 1e-8;
constexpr double kDaviesCovTol = 1e-9;
constexpr double kFloquetCovTol = 1e-8;
constexpr double kChoiTol = -1e-8;
constexpr double kReductionTol = 1e-8;
constexpr double kAlgebraTol = 1e-6;
constexpr double kZenoSlope = 2.0;
constexpr double kZenoSlack = 0.05;
constexpr double kFitR2 = 0.9;
constexpr double kQecTol = 1e-12;
constexpr double kKmsTol = 1e-12;
constexpr double kFaultTol = 1e-15;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Suite {
  std::vector<LindbladGenerator> davies;
  std::vector<std::pair<Mat, LindbladGenerator>> davies_h;  // (H, L)
  std::vector<std::pair<FloquetSystem, LindbladGenerator>> floquet;
  std::vector<LindbladGenerator> scl;
};

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

PeriodicDrive driven_qubit() {
  PeriodicDrive d(0.5 * pauli_z(), 2.0 * kPi / 1.7);
  d.add_cos(pauli_x(), 1, 0.3);
  return d;
}

Suite build_suite() {
  Suite s;
  std::mt19937_64 rng(2024);
  const double betas[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + i % 3;
    const Mat h = random_hermitian(d, rng);
    const auto model = make_bosonic_spectral(betas[i % 3], 12.0, 0.3);
    std::vector<Coupling> cs{{random_hermitian(d, rng), 0.3}};
    if (i % 4 == 0) cs.push_back({random_hermitian(d, rng), 0.2});
    auto gen = davies_generator(h, cs, model);
    s.davies.push_back(gen);
    s.davies_h.emplace_back(h, gen);
  }
  const auto fmodel = make_bosonic_spectral(1.0, 30.0, 0.2);
  {
    auto drive = driven_qubit();
    auto fs = floquet_analyze(drive.sampler(), drive.period());
    auto gen = periodic_generator(fs, {{pauli_x(), 0.3}}, fmodel);
    s.floquet.emplace_back(std::move(fs), std::move(gen));
  }
  for (int i = 0; i < 4; ++i) {
    const int d = 2 + i % 2;
    PeriodicDrive drive(random_hermitian(d, rng), 1.5 + 0.7 * i);
    drive.add_cos(random_hermitian(d, rng), 1, 0.3).add_sin(random_hermitian(d, rng), 2, 0.1);
    auto fs = floquet_analyze(drive.sampler(), drive.period());
    auto gen = periodic_generator(fs, {{random_hermitian(d, rng), 0.3}}, fmodel);
    s.floquet.emplace_back(std::move(fs), std::move(gen));
  }
  for (int i = 0; i < 3; ++i) {
    const int d = 2 + i;
    s.scl.push_back(scl_generator(random_hermitian(d, rng), 0.5, 0.4, random_hermitian(d, rng)));
  }
  return s;
}

Outcome gibbs_stationarity(const Suite& s) {
  double worst = 0.0;
  std::mt19937_64 rng(2024);
  const double betas[] = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < s.davies_h.size(); ++i) {
    const auto& [h, gen] = s.davies_h[i];
    // Independent Gibbs state from the eigendecomposition of H.
    const auto es = hermitian_eig(h);
    const double beta = betas[i % 3];
    RVec w = (-beta * (es.values.array() - es.values.minCoeff())).exp();
    w /= w.sum();
    const Mat gibbs = es.vectors * w.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    worst = std::max(worst, gen.apply(gibbs).norm());
  }
  return {worst <= kGibbsTol, fmt("20 random systems, max ||L(gibbs)||_F = %.3e", worst)};
}

Outcome covariance(const Suite& s) {
  double dav = 0.0, flo = 0.0;
  for (const auto& [h, gen] : s.davies_h) dav = std::max(dav, covariance_defect(gen, h));
  for (const auto& [fs, gen] : s.floquet) flo = std::max(flo, floquet_covariance_defect(gen, fs.monodromy));
  return {dav <= kDaviesCovTol && flo <= kFloquetCovTol,
          fmt2("max Davies defect %.3e, max Floquet defect %.3e", dav, flo)};
}

Outcome complete_positivity(const Suite& s) {
  double worst = std::numeric_limits<double>::infinity();
  int count = 0;
  auto visit = [&](const LindbladGenerator& g) {
    for (double t : {0.1, 1.0, 10.0}) worst = std::min(worst, g.choi_min_eigenvalue(t));
    ++count;
  };
  for (const auto& g : s.davies) visit(g);
  for (const auto& [fs, g] : s.floquet) visit(g);
  for (const auto& g : s.scl) visit(g);
  return {worst >= kChoiTol, fmt2("%.0f generators, min Choi eigenvalue %.3e", count, worst)};
}

Outcome floquet_reduction() {
  std::mt19937_64 rng(77);
  const auto g = make_bosonic_spectral(1.0, 30.0, 0.2);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    const Mat h = random_hermitian(d, rng);
    std::vector<Coupling> cs{{random_hermitian(d, rng), 0.5}};
    auto fs = floquet_analyze([h](double) { return h; }, 0.7 + 0.3 * trial);
    auto lf = periodic_generator(fs, cs, g);
    auto ld = davies_generator(h, cs, g);
    worst = std::max(worst, (lf.dissipator().matrix() - ld.dissipator().matrix()).norm());
  }
  return {worst <= kReductionTol, fmt("10 random constant-H cases, max ||L_F - L_D||_F = %.3e", worst)};
}

Outcome propagator_algebra() {
  const auto drive = driven_qubit();
  const auto fs = floquet_analyze(drive.sampler(), drive.period());
  const auto gen = periodic_generator(fs, {{pauli_x(), 0.3}}, make_bosonic_spectral(2.0, 6.0, 1.0));
  const double th = fs.period;
  std::mt19937_64 rng(5);
  double comp = 0.0, period = 0.0, ode = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Mat rho = random_density(2, rng);
    const double s = 0.37 * th * (k + 1), t = s + 1.3 * th + 0.4 * k, u = t + 2.1 * th;
    auto apply = [](const Mat& l, const Mat& r) { return unvec(l * vec(r), r.rows()); };
    const Mat direct = apply(covariant_propagator(fs, gen, u, s), rho);
    const Mat composed = apply(covariant_propagator(fs, gen, u, t), apply(covariant_propagator(fs, gen, t, s), rho));
    comp = std::max(comp, trace_distance(direct, composed));
    const Mat shifted = apply(covariant_propagator(fs, gen, t + th, s + th), rho);
    period = std::max(period, trace_distance(apply(covariant_propagator(fs, gen, t, s), rho), shifted));
    const Mat ref = covariant_reference(fs, gen, rho, t, s);
    ode = std::max(ode, trace_distance(apply(covariant_propagator(fs, gen, t, s), rho), ref));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "composition %.2e, periodicity %.2e, factorized vs ODE %.2e", comp, period, ode);
  return {comp <= kAlgebraTol && period <= kAlgebraTol && ode <= kAlgebraTol, buf};
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

Outcome zeno() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int m = 0; m < 5; ++m) {
    const int d = 2 + m % 2;
    const Mat h = random_hermitian(d, rng);
    const Mat s = random_hermitian(d, rng);
    const double cutoff = 3.0 + 5.0 * u(rng);
    const auto model = make_bosonic_spectral(0.5 + 2.0 * u(rng), cutoff, 1.0);
    const double scale = cutoff + hermitian_eig(h).values.cwiseAbs().maxCoeff();
    std::vector<double> ts, ks;
    for (int k = 0; k <= 8; ++k) {
      const double t = std::pow(10.0, -4.0 + 0.25 * k) / scale;  // two decades
      ts.push_back(t);
      ks.push_back(born_cumulant([h](double) { return h; }, s, model, t, 32).full.matrix().norm());
    }
    worst = std::max(worst, std::abs(slope(ts, ks) - kZenoSlope));
  }
  return {worst <= kZenoSlack, fmt("5 random models, max |slope - 2| = %.3e", worst)};
}

Outcome gate_speed() {
  GateSpeedSetup setup;
  std::vector<double> ms, peaks;
  std::string detail = "peaks:";
  for (double k : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    const auto p = gate_speed_point(setup, k * kPi);
    ms.push_back(p.m);
    peaks.push_back(p.peak_deviation);
    detail += fmt(" %.3g", p.peak_deviation);
  }
  const auto fit = nonmarkov_scaling_fit(ms, peaks);
  detail += fmt2("; beta = %.3f, R^2 = %.3f", fit.beta, fit.r_squared);
  return {peaks.front() > peaks.back() && fit.beta > 0.0 && fit.r_squared >= kFitR2, detail};
}

Outcome qec_theorem() {
  const auto code = bit_flip_code();
  std::mt19937_64 rng(8);
  const Vec c = random_ket(2, rng);
  const Vec psi = c(0) * code.codewords[0] + c(1) * code.codewords[1];
  double worst = 0.0, max_impure_f = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Mat rho = random_density(4, rng);
    const double f = run_recovery(code, psi, DensityMatrix(rho)).fidelity;
    worst = std::max(worst, std::abs(f - std::real(rho(0, 0))));
    max_impure_f = std::max(max_impure_f, f);
  }
  const double pure_f = run_recovery(code, psi, DensityMatrix::pure(basis_ket(4, 0))).fidelity;
  const bool iff = std::abs(pure_f - 1.0) <= kQecTol && max_impure_f < 1.0 - kQecTol &&
                   run_recovery(code, psi, DensityMatrix::pure(basis_ket(4, 1))).fidelity < 1.0 - kQecTol;
  return {worst <= kQecTol && iff,
          fmt2("50 random ancillas, max |F_sim - <0|rho|0>| = %.3e; F(pure |0>) - 1 = %.1e", worst, pure_f - 1.0)};
}

Outcome kms_identity() {
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto model = make_bosonic_spectral(beta, 20.0, 1.0);
    for (int i = 1; i <= 100; ++i) {
      const double w = 0.15 * i;
      const double g = model(w);
      worst = std::max(worst, std::abs(model(-w) - std::exp(-beta * w) * g) / g);
    }
  }
  return {worst <= kKmsTol, fmt("100 frequencies x 3 temperatures, max relative violation %.3e", worst)};
}

Outcome fault_path() {
  // Independent arithmetic by repeated multiplication.
  auto reference = [](double c, double eta, int k, int v) {
    double x = c;
    for (int i = 0; i < k; ++i) x *= eta;
    for (int i = 0; i < v - k; ++i) x *= 1.0 - eta;
    return x;
  };
  struct Spot {
    double c, eta;
    int k, v;
  };
  const Spot spots[] = {{1.0, 0.3, 0, 0}, {1.0, 0.01, 2, 2}, {1.0, 0.01, 1, 100}, {3.5, 1e-3, 3, 7}, {0.2, 0.5, 5, 10}};
  double worst = 0.0;
  for (const auto& s : spots) worst = std::max(worst, std::abs(fault_path_bound(s.c, s.eta, s.k, s.v) - reference(s.c, s.eta, s.k, s.v)));
  return {worst <= kFaultTol, fmt("5 spot values, max |difference| = %.3e", worst)};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto t0 = clock::now();
  Suite suite = build_suite();
  const double suite_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Gibbs stationarity", 10.0, [&] { return gibbs_stationarity(suite); }},
      {2, "covariance", 0.0, [&] { return covariance(suite); }},
      {3, "complete positivity", 0.0, [&] { return complete_positivity(suite); }},
      {4, "Floquet reduction to Davies", 0.0, floquet_reduction},
      {5, "Floquet propagator algebra", 60.0, propagator_algebra},
      {6, "Zeno short-time law", 0.0, zeno},
      {7, "fast vs slow gate", 600.0, gate_speed},
      {8, "QEC fidelity theorem", 30.0, qec_theorem},
      {9, "KMS analytic identity", 0.0, kms_identity},
      {10, "fault-path bound arithmetic", 0.0, fault_path},
  };
  for (const auto& c : criteria) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (c.id == 1) seconds += suite_seconds;
    const bool in_time = c.limit_seconds == 0.0 || seconds < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
