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

#include "qmarkov/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qmarkov {

Tolerances& Tolerances::defaults() {
  static Tolerances tol;
  return tol;
}

void Tolerances::set(const std::string& key, double value) {
  if (key == "hermitian") hermitian = value;
  else if (key == "unitary") unitary = value;
  else if (key == "trace") trace = value;
  else if (key == "positivity") positivity = value;
  else if (key == "cluster") cluster = value;
  else if (key == "bochner") bochner = value;
  else if (key == "markov_factor") markov_factor = value;
  else throw std::invalid_argument("unknown tolerance key '" + key + "'");
}

std::vector<std::pair<std::string, double>> Tolerances::entries() const {
  return {{"hermitian", hermitian}, {"unitary", unitary},   {"trace", trace},
          {"positivity", positivity}, {"cluster", cluster}, {"bochner", bochner},
          {"markov_factor", markov_factor}};
}

const char* to_string(OpTag tag) {
  switch (tag) {
    case OpTag::hermitian: return "hermitian";
    case OpTag::unitary: return "unitary";
    default: return "general";
  }
}

namespace {

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw StructuralError(os.str(), 0.0);
  }
}

}  // namespace

Operator::Operator(Mat m, OpTag tag) : m_(std::move(m)), tag_(tag) {
  require_square(m_, "Operator");
  const auto& tol = Tolerances::defaults();
  if (tag_ == OpTag::hermitian) {
    double dev = hermiticity_deviation(m_);
    if (dev > tol.hermitian * (1.0 + m_.cwiseAbs().maxCoeff())) {
      std::ostringstream os;
      os << "operator tagged hermitian deviates from its adjoint by " << dev;
      throw StructuralError(os.str(), dev);
    }
  } else if (tag_ == OpTag::unitary) {
    double dev = unitarity_deviation(m_);
    if (dev > tol.unitary) {
      std::ostringstream os;
      os << "operator tagged unitary has max|U^dag U - I| = " << dev;
      throw StructuralError(os.str(), dev);
    }
  }
}

DensityMatrix::DensityMatrix(Mat m, double positivity_slack) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  const auto& tol = Tolerances::defaults();
  double slack = positivity_slack < 0 ? tol.positivity : positivity_slack;
  double herm = hermiticity_deviation(m_);
  if (herm > tol.hermitian * (1.0 + m_.cwiseAbs().maxCoeff())) {
    throw StructuralError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")",
                          herm);
  }
  double tr_err = std::abs(m_.trace() - cplx(1.0, 0.0));
  if (tr_err > tol.trace) {
    throw StructuralError("density matrix trace differs from 1 by " + std::to_string(tr_err), tr_err);
  }
  Mat h = 0.5 * (m_ + m_.adjoint());
  double lo = min_eigenvalue(h);
  if (lo < -slack) {
    throw StructuralError("density matrix has negative eigenvalue " + std::to_string(lo), -lo);
  }
}

DensityMatrix DensityMatrix::pure(const Vec& ket) {
  Vec k = ket / ket.norm();
  return DensityMatrix(k * k.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

Superoperator::Superoperator(Eigen::Index dim, Mat m) : d_(dim), m_(std::move(m)) {
  if (m_.rows() != dim * dim || m_.cols() != dim * dim) {
    throw StructuralError("superoperator matrix must be d^2 x d^2", 0.0);
  }
}

Superoperator Superoperator::zero(Eigen::Index dim) {
  return Superoperator(dim, Mat::Zero(dim * dim, dim * dim));
}

Superoperator Superoperator::identity(Eigen::Index dim) {
  return Superoperator(dim, Mat::Identity(dim * dim, dim * dim));
}

Mat Superoperator::apply(const Mat& x) const { return unvec(m_ * vec(x), d_); }

Superoperator Superoperator::operator+(const Superoperator& o) const {
  return Superoperator(d_, m_ + o.m_);
}
Superoperator Superoperator::operator-(const Superoperator& o) const {
  return Superoperator(d_, m_ - o.m_);
}
Superoperator Superoperator::operator*(const Superoperator& o) const {
  return Superoperator(d_, m_ * o.m_);
}
Superoperator Superoperator::operator*(cplx s) const { return Superoperator(d_, m_ * s); }

double hermiticity_deviation(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const Mat& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double rel_tol) {
  double tol = rel_tol < 0 ? Tolerances::defaults().hermitian : rel_tol;
  return a.rows() == a.cols() && hermiticity_deviation(a) <= tol * (1.0 + a.cwiseAbs().maxCoeff());
}

EigenSystem hermitian_eig(const Mat& a) {
  require_square(a, "hermitian_eig");
  double dev = hermiticity_deviation(a);
  if (dev > Tolerances::defaults().hermitian * (1.0 + a.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "hermitian_eig: input is not Hermitian, max |A - A^dag| = " << dev;
    throw StructuralError(os.str(), dev);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hermitian + hermitian.adjoint()),
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat matrix_exp(const Mat& a) {
  if (!a.allFinite()) throw Error("matrix_exp: non-finite input");
  Mat e = a.exp();
  if (!e.allFinite()) throw Error("matrix_exp: overflow");
  return e;
}

Mat unitary_exp(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Vec phases = (es.eigenvalues().cast<cplx>() * (-kI * t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Vec vec(const Mat& x) { return Eigen::Map<const Vec>(x.data(), x.size()); }

Mat unvec(const Vec& v, Eigen::Index dim) { return Eigen::Map<const Mat>(v.data(), dim, dim); }

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Mat kron(const std::vector<Mat>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Mat partial_trace(const Mat& rho, Factor keep, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b) {
    throw StructuralError("partial_trace: dimension " + std::to_string(rho.rows()) +
                              " does not match dA*dB = " + std::to_string(dim_a * dim_b),
                          0.0);
  }
  // Index of |a b> is a * dim_b + b.
  if (keep == Factor::first) {
    Mat out = Mat::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        out(i, j) = rho.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    return out;
  }
  Mat out = Mat::Zero(dim_b, dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a) out += rho.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return out;
}

double trace_distance(const Mat& rho, const Mat& sigma) {
  Mat diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Mat spre(const Mat& a) { return kron(identity(a.rows()), a); }
Mat spost(const Mat& b) { return kron(b.transpose(), identity(b.rows())); }
Mat sandwich(const Mat& a, const Mat& b) { return kron(b.transpose(), a); }

Mat hamiltonian_superop(const Mat& h) { return -kI * (spre(h) - spost(h)); }

Mat unitary_superop(const Mat& u) { return kron(u.conjugate(), u); }

Mat dissipator_superop(const Mat& jump) {
  Mat jdj = jump.adjoint() * jump;
  return sandwich(jump, jump.adjoint()) - 0.5 * spre(jdj) - 0.5 * spost(jdj);
}

Mat choi(const Mat& superop, Eigen::Index dim) {
  if (superop.rows() != dim * dim) throw StructuralError("choi: superoperator size mismatch", 0.0);
  Mat out = Mat::Zero(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      // vec(|i><j|) has a single 1 at position j*dim + i.
      Mat image = unvec(superop.col(j * dim + i), dim);
      Mat eij = Mat::Zero(dim, dim);
      eij(i, j) = 1.0;
      out += kron(eij, image);
    }
  }
  return out;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_plus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

Vec basis_ket(Eigen::Index dim, Eigen::Index index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return v;
}

Mat qubit_site_op(const Mat& op, int site, int n_qubits) {
  std::vector<Mat> factors(static_cast<std::size_t>(n_qubits), identity(2));
  factors[static_cast<std::size_t>(site)] = op;
  return kron(factors);
}

Mat gibbs_state(const Mat& h, double beta) {
  auto es = hermitian_eig(h);
  const auto n = es.values.size();
  RVec w(n);
  if (std::isinf(beta)) {
    double e0 = es.values(0);
    double tol = Tolerances::defaults().cluster * (1.0 + es.values.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) w(i) = (es.values(i) - e0 <= tol) ? 1.0 : 0.0;
  } else {
    double e0 = es.values(0);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = std::exp(-beta * (es.values(i) - e0));
  }
  w /= w.sum();
  return es.vectors * w.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

Mat random_hermitian(Eigen::Index dim, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cplx(n(rng), n(rng));
  return scale * 0.5 * (g + g.adjoint());
}

Mat random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    cplx d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

Mat random_density(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cplx(n(rng), n(rng));
  Mat rho = g * g.adjoint();
  return rho / rho.trace();
}

Vec random_ket(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(n(rng), n(rng));
  return v / v.norm();
}

}  // namespace qmarkov
