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

// Dense complex linear algebra and quantum-information primitives.
//
// Conventions used across the whole library:
//   * hbar = k_B = 1, all frequencies are angular.
//   * Operators on a d-dimensional Hilbert space are d x d complex matrices.
//   * Superoperators act on column-stacked vectorizations:
//       vec(A X B) = (B^T (x) A) vec(X)
//     so a superoperator is a d^2 x d^2 matrix.

#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmarkov {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Numerical tolerances. Defaults follow the documented contracts; the CLI can
// override individual entries with --tol-override KEY=VAL.
struct Tolerances {
  double hermitian = 1e-10;    // relative, scaled by (1 + max|A|)
  double unitary = 1e-10;
  double trace = 1e-10;
  double positivity = 1e-9;    // allowed negative eigenvalue of a state
  double cluster = 1e-9;       // Bohr-frequency clustering, relative to (1 + ||H||)
  double bochner = 1e-12;      // allowed negative spectral value
  double markov_factor = 10.0; // "much greater than" threshold in validity reports

  static Tolerances& defaults();
  // Sets one field by name; throws std::invalid_argument on unknown keys.
  void set(const std::string& key, double value);
  std::vector<std::pair<std::string, double>> entries() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix failed a declared structural property (Hermitian, unitary, shape).
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

enum class OpTag { general, hermitian, unitary };

const char* to_string(OpTag tag);

// Square complex matrix with a checked structural tag.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Mat m, OpTag tag = OpTag::general);

  static Operator hermitian(Mat m) { return Operator(std::move(m), OpTag::hermitian); }
  static Operator unitary(Mat m) { return Operator(std::move(m), OpTag::unitary); }

  Eigen::Index dim() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }
  OpTag tag() const { return tag_; }

 private:
  Mat m_;
  OpTag tag_ = OpTag::general;
};

// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Validates with the given positivity slack (defaults to Tolerances).
  explicit DensityMatrix(Mat m, double positivity_slack = -1.0);

  static DensityMatrix pure(const Vec& ket);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
};

// d^2 x d^2 matrix acting on column-stacked operators.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Eigen::Index dim, Mat m);

  static Superoperator zero(Eigen::Index dim);
  static Superoperator identity(Eigen::Index dim);

  Eigen::Index dim() const { return d_; }
  const Mat& matrix() const { return m_; }
  Mat apply(const Mat& x) const;

  Superoperator operator+(const Superoperator& o) const;
  Superoperator operator-(const Superoperator& o) const;
  Superoperator operator*(const Superoperator& o) const;  // composition
  Superoperator operator*(cplx s) const;

 private:
  Eigen::Index d_ = 0;
  Mat m_;
};

// ---------------------------------------------------------------------------
// Structural measures

double hermiticity_deviation(const Mat& a);
double unitarity_deviation(const Mat& u);
bool is_hermitian(const Mat& a, double rel_tol = -1.0);

// ---------------------------------------------------------------------------
// Spectral tools

struct EigenSystem {
  RVec values;   // ascending
  Mat vectors;   // columns are orthonormal eigenvectors
};

// Throws StructuralError naming the deviation when `a` is not Hermitian.
EigenSystem hermitian_eig(const Mat& a);
double min_eigenvalue(const Mat& hermitian);

Mat matrix_exp(const Mat& a);

// e^{-i H t} for Hermitian H via its eigendecomposition.
Mat unitary_exp(const Mat& h, double t);

// Vectors and tensor products
Vec vec(const Mat& x);
Mat unvec(const Vec& v, Eigen::Index dim);
Mat kron(const Mat& a, const Mat& b);
Mat kron(const std::vector<Mat>& factors);

enum class Factor { first, second };

Mat partial_trace(const Mat& rho, Factor keep, Eigen::Index dim_a, Eigen::Index dim_b);
double trace_distance(const Mat& rho, const Mat& sigma);

// Superoperator building blocks (column stacking)
Mat spre(const Mat& a);                     // X -> A X
Mat spost(const Mat& b);                    // X -> X B
Mat sandwich(const Mat& a, const Mat& b);   // X -> A X B
Mat hamiltonian_superop(const Mat& h);      // X -> -i[H, X]
Mat unitary_superop(const Mat& u);          // X -> U X U^dag
Mat dissipator_superop(const Mat& jump);    // X -> J X J^dag - 1/2 {J^dag J, X}

// Choi matrix J = sum_ij |i><j| (x) Phi(|i><j|); the map is CP iff J is PSD.
Mat choi(const Mat& superop, Eigen::Index dim);

// ---------------------------------------------------------------------------
// Standard operators

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat sigma_plus();   // |0><1|
Mat sigma_minus();  // |1><0|
Mat identity(Eigen::Index dim);
Vec basis_ket(Eigen::Index dim, Eigen::Index index);
// Single-site operator embedded in an n-qubit register (site 0 is the leftmost factor).
Mat qubit_site_op(const Mat& op, int site, int n_qubits);

// Gibbs state e^{-beta H}/Z; beta = +inf yields the projector onto the ground space.
Mat gibbs_state(const Mat& h, double beta);

// ---------------------------------------------------------------------------
// Seeded random generators (used by sweeps and tests)

Mat random_hermitian(Eigen::Index dim, std::mt19937_64& rng, double scale = 1.0);
Mat random_unitary(Eigen::Index dim, std::mt19937_64& rng);
Mat random_density(Eigen::Index dim, std::mt19937_64& rng);
Vec random_ket(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace qmarkov
