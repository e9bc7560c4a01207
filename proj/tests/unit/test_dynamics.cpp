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

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>

#include "qmarkov/dynamics.hpp"

using namespace qmarkov;
using qmarkov::test::diff;

namespace {

double expectation(const Mat& rho, const Mat& op) { return std::real((rho * op).trace()); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("Larmor precession under a pure Hamiltonian generator") {
  LindbladGenerator gen(0.5 * pauli_z(), {});
  const Vec plus = (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
  const auto times = uniform_grid(10.0, 41);
  const auto r = lindblad_evolve(gen, DensityMatrix::pure(plus), times, 1e-11);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(expectation(r.states[i], pauli_x()) == doctest::Approx(std::cos(times[i])).epsilon(1e-8));
  CHECK(r.max_trace_drift < 1e-10);
  CHECK(r.min_eigenvalue > -1e-10);
}

TEST_CASE("singular-coupling dephasing decays coherences at 2 lambda^2 a") {
  const double a = 0.7, lambda = 0.4;
  auto gen = scl_generator(pauli_z(), a, lambda);
  const Vec plus = (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
  const auto times = uniform_grid(5.0, 11);
  const auto r = lindblad_evolve(gen, DensityMatrix::pure(plus), times, 1e-11);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(r.states[i](0, 1)) == doctest::Approx(0.5 * std::exp(-2 * lambda * lambda * a * times[i])).epsilon(1e-8));
}

TEST_CASE("Davies evolution relaxes to the Gibbs state") {
  const double beta = 1.3, lambda = 0.3;
  const Mat h = 0.5 * pauli_z();
  const auto model = make_bosonic_spectral(beta, 5.0, 1.0);
  auto gen = davies_generator(h, {{pauli_x(), lambda}}, model);
  const double gamma = lambda * lambda * (model(1.0) + model(-1.0));
  const auto r = lindblad_evolve(gen, DensityMatrix::pure(basis_ket(2, 0)), {0.0, 50.0 / gamma}, 1e-11);
  CHECK(trace_distance(r.states.back(), gibbs_state(h, beta)) < 1e-8);
}

TEST_CASE("adiabatic Davies with a constant Hamiltonian equals Davies evolution") {
  const Mat h = 0.5 * pauli_z();
  const auto model = make_bosonic_spectral(2.0, 4.0, 1.0);
  const std::vector<Coupling> c{{pauli_x(), 0.2}};
  const auto rho0 = DensityMatrix::pure(basis_ket(2, 0));
  const auto times = uniform_grid(20.0, 5);
  const auto a = adiabatic_davies_evolve([&](double) { return h; }, c, model, rho0, times);
  const auto b = lindblad_evolve(davies_generator(h, c, model), rho0, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(diff(a.states[i], b.states[i]) < 1e-7);
}

TEST_CASE("lindblad_evolve rejects a generator that breaks positivity") {
  Mat bad = Mat::Zero(4, 4);
  bad(3, 0) = -1.0;  // drives the |1><1| population negative
  CHECK_THROWS_AS(lindblad_evolve([&](double) { return bad; }, DensityMatrix::pure(basis_ket(2, 0)),
                                  uniform_grid(5.0, 6)),
                  Error);
}

TEST_CASE("Born cumulant grows quadratically in the Zeno regime") {
  const double cutoff = 5.0;
  const auto model = make_bosonic_spectral(1.0, cutoff, 1.0);
  const Mat h = 0.5 * pauli_z();
  std::vector<double> ts, norms;
  for (double t : {1e-3, 2e-3, 4e-3, 1e-2}) {
    const double tt = t / cutoff;
    ts.push_back(tt);
    norms.push_back(born_cumulant([&](double) { return h; }, pauli_x(), model, tt, 32).full.matrix().norm());
  }
  CHECK(loglog_slope(ts, norms) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("Born cumulant of a narrow Gaussian correlation reduces to singular coupling") {
  const double t = 1.0, sigma = 1e-3 * t, a = 0.8;
  // Normalized so that int F = a; the whole weight sits well inside [0, t].
  auto f = [&](double tau) -> cplx {
    return a / (std::sqrt(2 * kPi) * sigma) * std::exp(-0.5 * tau * tau / (sigma * sigma));
  };
  const Mat s = pauli_x();
  const auto k = born_cumulant([](double) { return Mat(Mat::Zero(2, 2)); }, s, f, t, 4000);
  const Mat expected = t * scl_generator(s, a, 1.0).superop().matrix();
  CHECK(diff(k.full.matrix(), expected) / expected.norm() < 5e-3);
  CHECK(k.lamb_shift.norm() < 1e-12);
}

TEST_CASE("Born cumulant per unit time approaches the Davies dissipator") {
  const auto model = make_bosonic_spectral(1.0, 5.0, 1.0);
  const Mat h = 0.5 * pauli_z();
  const Mat s = pauli_x();
  DaviesOptions opts;
  opts.include_hamiltonian = false;
  const Mat davies = 2.0 * kPi * davies_generator(h, {{s, 1.0}}, model, opts).dissipator().matrix();
  std::vector<double> errs;
  for (double t : {50.0, 200.0}) {
    const auto k = born_cumulant([&](double) { return h; }, s, model, t);
    errs.push_back(diff(k.dissipative().matrix() / t, davies) / davies.norm());
    CHECK(hermiticity_deviation(k.lamb_shift) < 1e-10);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[1] < 0.05);
}

TEST_CASE("spin-star oracle without coupling is unitary system evolution") {
  const auto bath = SpinStarBath::uniform_band(2, 1.0, 0.1, 0.0, 0.7);
  auto r = test::rng(31);
  const Mat hs = random_hermitian(2, r);
  const Mat rho0 = random_density(2, r);
  const auto times = uniform_grid(3.0, 7);
  SpinStarModel constant{[&](double) { return hs; }, true, pauli_x(), 0.5, bath};
  const auto c = spin_star_oracle(constant, DensityMatrix(rho0), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Mat u = unitary_exp(hs, times[i]);
    CHECK(diff(c.states[i], u * rho0 * u.adjoint()) < 1e-10);
  }
  PeriodicDrive drive(hs, 1.1);
  drive.add_cos(pauli_y(), 1, 0.4);
  SpinStarModel driven{drive.sampler(), false, pauli_x(), 0.5, bath};
  const auto d = spin_star_oracle(driven, DensityMatrix(rho0), times);
  const auto p = Propagator::window(drive.sampler(), 3.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Mat u = p.at(times[i]);
    CHECK(diff(d.states[i], u * rho0 * u.adjoint()) < 1e-8);
  }
}

TEST_CASE("spin-star oracle reproduces the resonant two-spin exchange") {
  const double lambda = 0.3, g = 0.7;
  SpinStarBath bath{{1.0}, {g}, kInfiniteBeta};
  SpinStarModel model{[](double) { return Mat(0.5 * pauli_z()); }, true, pauli_x(), lambda, bath};
  const auto times = uniform_grid(12.0, 25);
  const auto constant = spin_star_oracle(model, DensityMatrix::pure(basis_ket(2, 0)), times);
  model.constant = false;
  const auto driven = spin_star_oracle(model, DensityMatrix::pure(basis_ket(2, 0)), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double ref = std::cos(2 * lambda * g * times[i]);
    CHECK(expectation(constant.states[i], pauli_z()) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(expectation(driven.states[i], pauli_z()) == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("spin-star reduced states stay physical at finite temperature") {
  auto r = test::rng(32);
  const auto bath = SpinStarBath::uniform_band(3, 1.0, 0.2, 1.0, 0.5);
  SpinStarModel model{[](double) { return Mat(0.5 * pauli_z()); }, true, pauli_y(), 0.2, bath};
  const auto res = spin_star_oracle(model, DensityMatrix(random_density(2, r)), uniform_grid(30.0, 16));
  CHECK(res.max_trace_drift < 1e-10);
  CHECK(res.min_eigenvalue > -1e-10);
}

TEST_CASE("off-resonant bath deviation scales as lambda^2 at fixed lambda^2 t") {
  // Band centered at 2 for a system at 1: the box spectral function vanishes at
  // the system's Bohr frequencies, so the Markov reference is unitary.
  const auto bath = SpinStarBath::uniform_band(2, 2.0, 0.1, 1.0, kInfiniteBeta);
  const Mat hs = 0.5 * pauli_z();
  const auto model = spin_star_spectral_model(bath);
  CHECK(model(1.0) == 0.0);
  CHECK(model(-1.0) == 0.0);
  std::vector<double> lambdas, peaks;
  for (double lambda : {0.08, 0.04, 0.02, 0.01}) {
    const auto times = uniform_grid(2.0 / (lambda * lambda), 401);
    SpinStarModel m{[&](double) { return hs; }, true, pauli_x(), lambda, bath};
    const auto rho0 = DensityMatrix::pure(basis_ket(2, 0));
    const auto exact = spin_star_oracle(m, rho0, times);
    const auto markov = lindblad_evolve(davies_generator(hs, {{pauli_x(), lambda}}, model), rho0, times);
    const auto dev = markovianity_deviation(exact, markov);
    lambdas.push_back(lambda);
    peaks.push_back(*std::max_element(dev.begin(), dev.end()));
  }
  CHECK(loglog_slope(lambdas, peaks) == doctest::Approx(2.0).epsilon(0.1));
  for (std::size_t i = 1; i < peaks.size(); ++i) CHECK(peaks[i] < peaks[i - 1]);
}

TEST_CASE("spin-star spectral model has box height 2 pi g^2 / spacing and satisfies KMS") {
  const auto cold = spin_star_spectral_model(SpinStarBath::uniform_band(4, 1.0, 0.05, 0.5, kInfiniteBeta));
  CHECK(cold(1.0 + 0.025) == doctest::Approx(2 * kPi * 0.25 / 0.05).epsilon(1e-9));
  CHECK(cold(-1.0) == 0.0);
  CHECK(cold(2.0) == 0.0);
  const auto warm = spin_star_spectral_model(SpinStarBath::uniform_band(4, 1.0, 0.05, 0.5, 2.0));
  const double w = 1.0 - 0.05 * 1.5;  // a mode frequency
  CHECK(warm(-w) / warm(w) == doctest::Approx(std::exp(-2.0 * w)).epsilon(1e-9));
  CHECK(warm(w) + warm(-w) == doctest::Approx(2 * kPi * 0.25 / 0.05).epsilon(1e-9));
  CHECK_THROWS_AS(spin_star_spectral_model(SpinStarBath{{1.0}, {1.0}, 1.0}), std::invalid_argument);
}

TEST_CASE("validity report for a qubit") {
  const auto slow = validity_report({-0.5, 0.5}, 10.0);
  CHECK(slow.t_floor == doctest::Approx(0.5));
  CHECK(slow.markovian_ok);
  const auto fast = validity_report({-0.5, 0.5}, kPi);
  CHECK_FALSE(fast.markovian_ok);
  REQUIRE(fast.margolus_levitin.size() == 1);
  CHECK(fast.margolus_levitin[0] == doctest::Approx(kPi / 2));
  CHECK(fast.band_width == doctest::Approx(1 / kPi));
  const auto rabi = validity_report({-0.5, 0.5}, kPi, 0.0, 0, RabiDrive{1.0, 0.0});
  CHECK(*rabi.rabi_pi_time == doctest::Approx(kPi));
  CHECK(*rabi.rabi_probability == doctest::Approx(1.0));
  CHECK(rabi_probability(1.0, 1.0, kPi / std::sqrt(2.0)) == doctest::Approx(0.5));
}

TEST_CASE("validity verdict is monotone in the gate time") {
  bool seen_ok = false;
  for (double tg = 0.1; tg < 1e4; tg *= 1.3) {
    const bool ok = validity_report({0.0, 0.7, 1.9}, tg, 0.37, 2).markovian_ok;
    if (seen_ok) CHECK(ok);
    seen_ok = seen_ok || ok;
  }
  CHECK(seen_ok);
}

TEST_CASE("a closed effective gap means no Markov generator") {
  const auto r = validity_report({0.0, 1.0, 3.0}, 1e6, 1.0, 1);
  CHECK(r.no_markov_generator);
  CHECK(std::isinf(r.t_floor));
  CHECK_FALSE(r.markovian_ok);
  const auto undriven = validity_report({0.0, 1.0, 3.0}, 1e6);
  CHECK_FALSE(undriven.no_markov_generator);
  CHECK(undriven.min_gap == doctest::Approx(1.0));
}

TEST_CASE("scaling fit recovers power laws") {
  const std::vector<double> ms{1, 2, 4, 8, 16};
  std::vector<double> p;
  for (double m : ms) p.push_back(0.3 / (m * m));
  const auto fit = nonmarkov_scaling_fit(ms, p);
  CHECK(fit.beta == doctest::Approx(2.0));
  CHECK(fit.prefactor == doctest::Approx(0.3));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_FALSE(fit.non_decaying);
  CHECK(fit.gate_budget[2] == doctest::Approx(16 / 0.3));
  const auto flat = nonmarkov_scaling_fit(ms, std::vector<double>(ms.size(), 0.1));
  CHECK(flat.non_decaying);
  CHECK(flat.r_squared == 1.0);
  CHECK_THROWS_AS(nonmarkov_scaling_fit({1.0}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(nonmarkov_scaling_fit({1.0, 2.0}, {0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("fault-path bound") {
  CHECK(fault_path_bound(1.0, 0.3, 0, 0) == 1.0);
  CHECK(fault_path_bound(1.0, 0.01, 2, 2) == doctest::Approx(1e-4));
  CHECK(fault_path_bound(1.0, 0.01, 1, 100) == doctest::Approx(0.01 * std::pow(0.99, 99)));
  CHECK_THROWS_AS(fault_path_bound(1.0, 1.5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(fault_path_bound(1.0, 0.5, 3, 2), std::invalid_argument);
}

TEST_CASE("gate-speed point on a small bath") {
  GateSpeedSetup setup;
  setup.bath_spins = 3;
  setup.window = 20.0;
  setup.time_points = 21;
  const auto pt = gate_speed_point(setup, 10 * kPi);
  CHECK(pt.gate_time == doctest::Approx(10 * kPi));
  REQUIRE(pt.deviations.size() == 21);
  CHECK(pt.deviations.front() < 1e-12);
  CHECK(pt.peak_deviation >= pt.final_deviation);
  CHECK(pt.peak_deviation < 0.1);
  CHECK(setup.lambda() == doctest::Approx(std::sqrt(0.002 * 0.01 / (2 * kPi))));
}
