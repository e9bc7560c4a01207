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

#include "qmarkov/core.hpp"

using namespace qmarkov;
using qmarkov::test::diff;

TEST_CASE("vectorization identity vec(AXB) = (B^T kron A) vec(X)") {
  auto r = test::rng(1);
  for (int d : {1, 2, 3, 5}) {
    Mat a = random_hermitian(d, r) + kI * random_hermitian(d, r);
    Mat b = random_unitary(d, r);
    Mat x = random_hermitian(d, r);
    CHECK(diff(unvec(sandwich(a, b) * vec(x), d), a * x * b) < 1e-12);
    CHECK(diff(unvec(spre(a) * vec(x), d), a * x) < 1e-12);
    CHECK(diff(unvec(spost(b) * vec(x), d), x * b) < 1e-12);
  }
}

TEST_CASE("superoperator builders agree with the maps they represent") {
  auto r = test::rng(2);
  const int d = 3;
  Mat h = random_hermitian(d, r);
  Mat u = random_unitary(d, r);
  Mat j = random_hermitian(d, r) + kI * random_hermitian(d, r);
  auto ham = [&](const Mat& x) -> Mat { return -kI * (h * x - x * h); };
  auto uni = [&](const Mat& x) -> Mat { return u * x * u.adjoint(); };
  auto dis = [&](const Mat& x) -> Mat {
    Mat jdj = j.adjoint() * j;
    return j * x * j.adjoint() - 0.5 * (jdj * x + x * jdj);
  };
  CHECK(diff(hamiltonian_superop(h), test::superop_from_map(ham, d)) < 1e-12);
  CHECK(diff(unitary_superop(u), test::superop_from_map(uni, d)) < 1e-12);
  CHECK(diff(dissipator_superop(j), test::superop_from_map(dis, d)) < 1e-12);
}

TEST_CASE("Choi matrix of the identity channel is d times a Bell projector") {
  const int d = 3;
  Mat j = choi(identity(d * d), d);
  auto es = hermitian_eig(j);
  CHECK(es.values(d * d - 1) == doctest::Approx(d));
  CHECK(std::abs(es.values(0)) < 1e-12);
  CHECK(std::abs(j.trace() - cplx(d)) < 1e-12);
}

TEST_CASE("Choi matrix of a transpose map is not positive") {
  const int d = 2;
  auto tr = [](const Mat& x) -> Mat { return x.transpose(); };
  CHECK(min_eigenvalue(choi(test::superop_from_map(tr, d), d)) < -0.5);
}

TEST_CASE("partial trace of a product state") {
  auto r = test::rng(3);
  Mat a = random_density(2, r), b = random_density(3, r);
  Mat ab = kron(a, b);
  CHECK(diff(partial_trace(ab, Factor::first, 2, 3), a) < 1e-12);
  CHECK(diff(partial_trace(ab, Factor::second, 2, 3), b) < 1e-12);
  CHECK_THROWS_AS(partial_trace(ab, Factor::first, 3, 3), StructuralError);
}

TEST_CASE("trace distance") {
  Mat p0 = basis_ket(2, 0) * basis_ket(2, 0).adjoint();
  Mat p1 = basis_ket(2, 1) * basis_ket(2, 1).adjoint();
  CHECK(trace_distance(p0, p1) == doctest::Approx(1.0));
  CHECK(trace_distance(p0, p0) == doctest::Approx(0.0));
  CHECK(trace_distance(p0, identity(2) / 2.0) == doctest::Approx(0.5));
}

TEST_CASE("unitary exponential matches the generic matrix exponential") {
  auto r = test::rng(4);
  Mat h = random_hermitian(4, r);
  CHECK(diff(unitary_exp(h, 0.7), matrix_exp(-kI * 0.7 * h)) < 1e-12);
  CHECK(unitarity_deviation(unitary_exp(h, 3.0)) < 1e-12);
}

TEST_CASE("structural validation") {
  Mat nh(2, 2);
  nh << 1, 2, 0, 1;
  CHECK_THROWS_AS(Operator::hermitian(nh), StructuralError);
  CHECK_THROWS_AS(Operator::unitary(nh), StructuralError);
  CHECK_NOTHROW(Operator::unitary(pauli_x()));
  Mat neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  CHECK_THROWS_AS(DensityMatrix{neg}, StructuralError);
  Mat badtr = identity(2);
  CHECK_THROWS_AS(DensityMatrix{badtr}, StructuralError);
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
  CHECK_THROWS_AS(Superoperator(2, identity(3)), StructuralError);
}

TEST_CASE("Pauli algebra and ladder operators") {
  CHECK(diff(pauli_x() * pauli_y(), kI * pauli_z()) < 1e-15);
  CHECK(diff(sigma_plus() + sigma_minus(), pauli_x()) < 1e-15);
  // sigma_minus maps |0> to |1>.
  CHECK(diff(sigma_minus() * basis_ket(2, 0), basis_ket(2, 1)) < 1e-15);
  Mat z1 = qubit_site_op(pauli_z(), 1, 3);
  CHECK(diff(z1, kron({identity(2), pauli_z(), identity(2)})) < 1e-15);
}

TEST_CASE("Gibbs state") {
  Mat h = 0.5 * pauli_z();
  Mat g = gibbs_state(h, 2.0);
  CHECK(std::real(g(0, 0)) == doctest::Approx(std::exp(-1.0) / (std::exp(-1.0) + std::exp(1.0))));
  Mat g0 = gibbs_state(h, std::numeric_limits<double>::infinity());
  CHECK(diff(g0, basis_ket(2, 1) * basis_ket(2, 1).adjoint()) < 1e-15);
  // Degenerate ground space gives the normalized projector.
  Mat hd = Mat::Zero(3, 3);
  hd(2, 2) = 1.0;
  Mat gd = gibbs_state(hd, std::numeric_limits<double>::infinity());
  CHECK(std::real(gd(0, 0)) == doctest::Approx(0.5));
}

TEST_CASE("random generators produce valid objects") {
  auto r = test::rng(5);
  for (int k = 0; k < 5; ++k) {
    CHECK(unitarity_deviation(random_unitary(4, r)) < 1e-12);
    CHECK_NOTHROW(DensityMatrix(random_density(4, r)));
    CHECK(is_hermitian(random_hermitian(4, r)));
  }
  auto r1 = test::rng(9), r2 = test::rng(9);
  CHECK(diff(random_hermitian(3, r1), random_hermitian(3, r2)) == 0.0);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  t.set("hermitian", 1e-6);
  CHECK(t.hermitian == 1e-6);
  CHECK_THROWS_AS(t.set("no_such_key", 1.0), std::invalid_argument);
  CHECK(t.entries().size() == 7);
}
