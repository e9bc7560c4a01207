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

#include "qmarkov/floquet.hpp"

using namespace qmarkov;
using qmarkov::test::diff;

namespace {

// Driven qubit used throughout: H(t) = w0/2 Z + A cos(Omega t) X.
PeriodicDrive driven_qubit(double w0 = 1.0, double big_omega = 1.7, double amp = 0.3) {
  PeriodicDrive drive(0.5 * w0 * pauli_z(), 2.0 * kPi / big_omega);
  drive.add_cos(pauli_x(), 1, amp);
  return drive;
}

// Circular resonant drive: w0/2 Z + Omega_R/2 (cos w0 t X + sin w0 t Y).
PeriodicDrive circular_drive(double w0, double rabi) {
  PeriodicDrive drive(0.5 * w0 * pauli_z(), 2.0 * kPi / w0);
  drive.add_cos(pauli_x(), 1, 0.5 * rabi).add_sin(pauli_y(), 1, 0.5 * rabi);
  return drive;
}

double wrapped_gap(double a, double b, double period_freq) {
  double g = std::fmod(std::abs(a - b), period_freq);
  return std::min(g, period_freq - g);
}

}  // namespace

TEST_CASE("propagator of a constant Hamiltonian is the matrix exponential") {
  auto r = test::rng(21);
  Mat h = random_hermitian(3, r);
  auto p = Propagator::periodic([h](double) { return h; }, 1.3);
  for (double t : {0.0, 0.4, 1.3, 2.9, 7.0}) CHECK(diff(p.at(t), unitary_exp(h, t)) < 1e-10);
  auto w = Propagator::window([h](double) { return h; }, 5.0);
  CHECK(diff(w.at(3.3), unitary_exp(h, 3.3)) < 1e-10);
  CHECK_THROWS_AS(w.at(6.0), std::invalid_argument);
  CHECK_THROWS_AS(p(0.2, 0.5), std::invalid_argument);
}

TEST_CASE("propagator composition and periodicity on a random periodic qubit") {
  auto r = test::rng(22);
  PeriodicDrive drive(random_hermitian(2, r), 2.3);
  drive.add_cos(random_hermitian(2, r), 1, 0.7).add_sin(random_hermitian(2, r), 2, 0.4);
  auto p = Propagator::periodic(drive.sampler(), drive.period());
  const double th = drive.period();
  CHECK(p.converged());
  CHECK(p.refinement_change() <= 1e-10);
  CHECK(diff(p(0.7 * th, 0.3 * th) * p(0.3 * th, 0.0), p(0.7 * th, 0.0)) < 1e-8);
  CHECK(diff(p(0.8 * th + th, 0.2 * th + th), p(0.8 * th, 0.2 * th)) < 1e-8);
  CHECK(unitarity_deviation(p.at(3.7 * th)) < 1e-10);
  // Independent oracle: a fine fixed-step midpoint product over the same interval.
  const int n = 20000;
  Mat u = identity(2);
  const double h = 0.6 * th / n;
  for (int k = 0; k < n; ++k) u = unitary_exp(drive(0.3 * th + (k + 0.5) * h), h) * u;
  CHECK(diff(u, p(0.9 * th, 0.3 * th)) < 1e-7);
}

TEST_CASE("tabulated periodic drive interpolates its samples") {
  std::vector<double> samples;
  for (int k = 0; k < 32; ++k) samples.push_back(std::cos(2.0 * kPi * k / 32));
  PeriodicDrive drive(Mat::Zero(2, 2), 2.0);
  drive.add_table(pauli_x(), samples);
  CHECK(std::real(drive(0.5)(0, 1)) == doctest::Approx(std::cos(kPi * 0.5)).epsilon(1e-12));
  CHECK(std::real(drive(0.37)(0, 1)) == doctest::Approx(std::cos(kPi * 0.37)).epsilon(1e-3));
  CHECK(std::real(drive(2.37)(0, 1)) == doctest::Approx(std::real(drive(0.37)(0, 1))));
}

TEST_CASE("undriven qubit: quasi-energies and single harmonic") {
  const double w0 = 0.8;
  const double th = 2.0 * kPi / 2.0;  // Omega = 2 > 2 w0
  Mat h = 0.5 * w0 * pauli_z();
  auto fs = floquet_analyze([h](double) { return h; }, th);
  CHECK(fs.quasienergies(0) == doctest::Approx(-0.5 * w0));
  CHECK(fs.quasienergies(1) == doctest::Approx(0.5 * w0));
  CHECK(fs.q_max == 0);
  CHECK(std::abs(std::abs(fs.fourier_component(0, 0).dot(basis_ket(2, 1))) - 1.0) < 1e-10);
  CHECK_FALSE(fs.degenerate);
}

TEST_CASE("resonant circular driving splits quasi-energies by the Rabi frequency") {
  const double w0 = 1.0, rabi = 0.3;
  auto fs = floquet_analyze(circular_drive(w0, rabi).sampler(), 2.0 * kPi / w0);
  const double split = wrapped_gap(fs.quasienergies(0), fs.quasienergies(1), fs.omega);
  CHECK(split == doctest::Approx(std::min(rabi, fs.omega - rabi)).epsilon(1e-8));
}

TEST_CASE("Floquet system invariants on the driven qubit") {
  auto drive = driven_qubit();
  auto fs = floquet_analyze(drive.sampler(), drive.period());
  CHECK(fs.q_max > 1);
  CHECK(fs.q_max <= 128);
  CHECK(fs.discarded_weight < 1e-12);
  for (Eigen::Index a = 0; a < 2; ++a) {
    const Vec phi = fs.modes.col(a);
    const cplx eig = std::exp(-kI * (fs.quasienergies(a) * fs.period));
    CHECK((fs.monodromy * phi - eig * phi).norm() < 1e-8);
    CHECK(std::abs(std::abs(eig) - 1.0) < 1e-14);
    double parseval = 0.0;
    for (int q = -fs.q_max; q <= fs.q_max; ++q) parseval += fs.fourier_component(a, q).squaredNorm();
    CHECK(parseval == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fs.quasienergies(a) > -0.5 * fs.omega);
    CHECK(fs.quasienergies(a) <= 0.5 * fs.omega);
    for (int k = 0; k < 16; ++k) {
      const double t = fs.period * (k + 0.37) / 16.0 + 2.0 * fs.period;
      CHECK((fs.evolved_mode(a, t) - fs.propagator->at(t) * phi).norm() < 1e-6);
    }
  }
}

TEST_CASE("degenerate quasi-energies are flagged") {
  // Energies +-Omega/2 collapse onto one quasi-energy.
  const double th = 2.0 * kPi;
  Mat h = 0.5 * pauli_z();
  auto fs = floquet_analyze([h](double) { return h; }, th);
  CHECK(fs.degenerate);
  CHECK(unitarity_deviation(fs.modes) < 1e-10);
}

TEST_CASE("harmonic operators of an undriven system reduce to the Bohr decomposition") {
  auto r = test::rng(23);
  Mat h = random_hermitian(3, r, 0.3);
  Mat s = random_hermitian(3, r);
  auto fs = floquet_analyze([h](double) { return h; }, 2.0);  // Omega = pi exceeds every Bohr frequency
  auto ho = harmonic_operators(fs, s);
  auto bd = bohr_decompose(h, s);
  CHECK(ho.harmonic_count() == 1);
  REQUIRE(ho.components.size() == bd.components.size());
  for (std::size_t k = 0; k < bd.components.size(); ++k) {
    CHECK(ho.components[k].q == 0);
    CHECK(ho.components[k].omega == doctest::Approx(bd.frequencies[k]));
    CHECK(diff(ho.components[k].op, bd.components[k]) < 1e-9);
  }
}

TEST_CASE("harmonic reconstruction and frequency content under resonant driving") {
  const double w0 = 1.0, rabi = 0.3;
  auto fs = floquet_analyze(circular_drive(w0, rabi).sampler(), 2.0 * kPi / w0);
  auto ho = harmonic_operators(fs, pauli_x());
  CHECK(diff(ho.reconstruct(0.0), pauli_x()) < 1e-9);
  for (int k = 0; k < 16; ++k) {
    const double t = 0.41 * k + 0.05;
    const Mat u = fs.propagator->at(t);
    CHECK(diff(ho.reconstruct(t), u.adjoint() * pauli_x() * u) < 1e-6);
  }
  std::vector<double> xs;
  for (const auto& c : ho.components) {
    const double x = c.effective_frequency(fs.omega);
    if (x > 1e-9 && c.op.norm() > 1e-8) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-8; }), xs.end());
  REQUIRE(xs.size() == 3);
  CHECK(xs[0] == doctest::Approx(w0 - rabi));
  CHECK(xs[1] == doctest::Approx(w0));
  CHECK(xs[2] == doctest::Approx(w0 + rabi));
}

TEST_CASE("periodic generator of an undriven system equals the Davies generator") {
  auto r = test::rng(24);
  auto g = make_bosonic_spectral(1.0, 30.0, 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    Mat h = random_hermitian(d, r);
    const double th = 0.7 + 0.3 * trial;  // some cases wrap energies out of the first zone
    std::vector<Coupling> cs{{random_hermitian(d, r), 0.5}};
    auto fs = floquet_analyze([h](double) { return h; }, th);
    auto lf = periodic_generator(fs, cs, g);
    auto ld = davies_generator(h, cs, g);
    CHECK(diff(lf.dissipator().matrix(), ld.dissipator().matrix()) < 1e-8);
  }
}

TEST_CASE("periodic generator properties under driving") {
  auto drive = driven_qubit();
  auto fs = floquet_analyze(drive.sampler(), drive.period());
  auto g = make_bosonic_spectral(1.0, 6.0, 0.1);
  auto gen = periodic_generator(fs, {{pauli_x(), 1.0}}, g);
  CHECK(floquet_covariance_defect(gen, fs.monodromy) < 1e-8);
  for (double t : {0.1, 1.0, 10.0}) CHECK(gen.choi_min_eigenvalue(t) > -1e-8);
  CHECK(hamiltonian_superop(gen.hamiltonian()).norm() == 0.0);

  auto zero = periodic_generator(fs, {}, g);
  CHECK(zero.superop().matrix().norm() == 0.0);
  auto zero2 = periodic_generator(fs, {{pauli_x(), 0.0}}, g);
  CHECK(zero2.superop().matrix().norm() == 0.0);

  Mat bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(periodic_generator(fs, {{pauli_x(), 1.0}, {pauli_z(), 1.0}}, SpectralModel::constant_matrix(bad)),
                  BochnerViolation);
  CHECK_THROWS_AS(periodic_generator(fs, {{pauli_x(), 1.0}}, SpectralModel::constant_matrix(bad)),
                  std::invalid_argument);
}

TEST_CASE("correlated couplings via a PSD spectral matrix") {
  auto drive = driven_qubit();
  auto fs = floquet_analyze(drive.sampler(), drive.period());
  Mat rm(2, 2);
  rm << 1.0, 0.5 * kI, -0.5 * kI, 0.7;
  auto gen = periodic_generator(fs, {{pauli_x(), 0.3}, {pauli_z(), 0.2}}, SpectralModel::constant_matrix(rm));
  CHECK(floquet_covariance_defect(gen, fs.monodromy) < 1e-8);
  CHECK(gen.choi_min_eigenvalue(1.0) > -1e-8);
}

TEST_CASE("stationary state of resonant driving with a flat spectral matrix is Floquet-diagonal") {
  const double w0 = 1.0, rabi = 0.3;
  auto fs = floquet_analyze(circular_drive(w0, rabi).sampler(), 2.0 * kPi / w0);
  Mat one = Mat::Identity(1, 1);
  auto gen = periodic_generator(fs, {{pauli_x(), 0.2}}, SpectralModel::constant_matrix(one));
  auto ss = floquet_steady_state(fs, gen);
  CHECK(ss.floquet_coherence < 1e-8);
  CHECK(ss.floquet_populations.sum() == doctest::Approx(1.0));
  CHECK(ss.frame_vs_stroboscopic < 1e-8);
}

TEST_CASE("covariant propagation: factorized form, algebra and direct integration") {
  auto drive = driven_qubit();
  auto fs = floquet_analyze(drive.sampler(), drive.period());
  auto gen = periodic_generator(fs, {{pauli_x(), 1.0}}, make_bosonic_spectral(1.0, 6.0, 0.1));
  const double th = fs.period;
  auto r = test::rng(25);
  DensityMatrix rho(random_density(2, r));

  const Mat a = covariant_propagator(fs, gen, 1.7 * th, 0.4 * th);
  CHECK(diff(covariant_propagator(fs, gen, 2.7 * th, 1.4 * th), a) < 1e-8);
  CHECK(diff(covariant_propagator(fs, gen, 1.7 * th, 0.9 * th) * covariant_propagator(fs, gen, 0.9 * th, 0.4 * th), a) < 1e-8);

  const Mat out = covariant_propagate(fs, gen, rho, 1.7 * th, 0.4 * th).matrix();
  const Mat ref = covariant_reference(fs, gen, rho.matrix(), 1.7 * th, 0.4 * th);
  CHECK(trace_distance(out, ref) < 1e-6);
  CHECK(std::abs(out.trace() - 1.0) < 1e-8);

  LindbladGenerator none(Mat::Zero(2, 2), {});
  const Mat u = (*fs.propagator)(2.2, 0.3);
  CHECK(diff(covariant_propagate(fs, none, rho, 2.2, 0.3).matrix(), u * rho.matrix() * u.adjoint()) < 1e-10);
  CHECK_THROWS_AS(covariant_propagate(fs, gen, rho, 0.1, 0.2), std::invalid_argument);
}
