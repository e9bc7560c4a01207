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

#include "qmarkov/qec.hpp"

#include <cmath>
#include <sstream>

namespace qmarkov {

DegenerateCodeError::DegenerateCodeError(const std::string& what, CodeReport report)
    : Error(what), report_(std::move(report)) {}

Mat QecScenario::code_projector() const {
  Mat p = Mat::Zero(system_dim, system_dim);
  for (const auto& c : codewords) p += c * c.adjoint();
  return p;
}

Mat QecScenario::decoherence_unitary() const {
  const Eigen::Index r = reservoir_dim();
  Mat dft(r, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index k = 0; k < r; ++k)
      dft(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(r)), 2.0 * kPi * double(j * k) / double(r));
  Mat controlled = Mat::Zero(system_dim * r, system_dim * r);
  for (Eigen::Index e = 0; e < r; ++e) {
    Mat flag = Mat::Zero(r, r);
    flag(e, e) = 1.0;
    controlled += kron(errors[static_cast<std::size_t>(e)], flag);
  }
  return kron(controlled * kron(identity(system_dim), dft), identity(ancilla_dim));
}

Mat QecScenario::syndrome_unitary() const {
  const Eigen::Index r = reservoir_dim();
  Mat rest = identity(system_dim);
  Mat u = Mat::Zero(total_dim(), total_dim());
  for (std::size_t e = 0; e < errors.size(); ++e) {
    u += kron({projectors[e], identity(r), syndrome[e]});
    rest -= projectors[e];
  }
  return u + kron({rest, identity(r), identity(ancilla_dim)});
}

Mat QecScenario::recovery_unitary() const {
  const Eigen::Index r = reservoir_dim();
  Mat rest = identity(ancilla_dim);
  Mat u = Mat::Zero(total_dim(), total_dim());
  for (std::size_t f = 0; f < errors.size(); ++f) {
    Mat flag = Mat::Zero(ancilla_dim, ancilla_dim);
    flag(Eigen::Index(f), Eigen::Index(f)) = 1.0;
    u += kron({errors[f].adjoint(), identity(r), flag});
    rest -= flag;
  }
  return u + kron({identity(system_dim), identity(r), rest});
}

QecScenario build_code(std::vector<Vec> codewords, std::vector<Mat> errors, std::vector<std::string> labels,
                       Eigen::Index ancilla_dim) {
  if (codewords.empty()) throw std::invalid_argument("build_code: no codewords");
  if (errors.empty()) throw std::invalid_argument("build_code: empty error set");
  const Eigen::Index d = codewords.front().size();
  const std::size_t ne = errors.size();
  QecScenario s;
  s.system_dim = d;
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    if (codewords[i].size() != d) throw std::invalid_argument("build_code: codewords have different dimensions");
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx ov = codewords[j].dot(codewords[i]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(ov - expected) > 1e-12) {
        std::ostringstream os;
        os << "build_code: codewords " << j << " and " << i << " are not orthonormal (overlap " << std::abs(ov) << ")";
        throw StructuralError(os.str(), std::abs(ov - expected));
      }
    }
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (errors[e].rows() != d || errors[e].cols() != d)
      throw std::invalid_argument("build_code: error operator dimension differs from the codewords");
    const double dev = unitarity_deviation(errors[e]);
    if (dev > 1e-10) throw StructuralError("build_code: error operator " + std::to_string(e) + " is not unitary", dev);
  }
  Mat span(d * d, static_cast<Eigen::Index>(ne));
  for (std::size_t e = 0; e < ne; ++e) span.col(Eigen::Index(e)) = vec(errors[e]);
  Eigen::FullPivLU<Mat> lu(span);
  lu.setThreshold(1e-10);
  if (lu.rank() != static_cast<Eigen::Index>(ne))
    throw std::invalid_argument("build_code: error operators are linearly dependent");

  if (labels.empty())
    for (std::size_t e = 0; e < ne; ++e) labels.push_back("E" + std::to_string(e));
  if (labels.size() != ne) throw std::invalid_argument("build_code: one label per error required");
  if (ancilla_dim == 0) ancilla_dim = static_cast<Eigen::Index>(ne);
  if (ancilla_dim < static_cast<Eigen::Index>(ne))
    throw std::invalid_argument("build_code: ancilla dimension must be at least the number of errors");

  s.codewords = std::move(codewords);
  s.errors = std::move(errors);
  s.labels = std::move(labels);
  s.ancilla_dim = ancilla_dim;
  const Mat pc = s.code_projector();
  for (const auto& u : s.errors) s.projectors.push_back(u * pc * u.adjoint());
  for (std::size_t e = 0; e < ne; ++e) {
    Mat t = identity(ancilla_dim);
    if (e > 0) {
      const auto k = Eigen::Index(e);
      t(0, 0) = t(k, k) = 0.0;
      t(0, k) = t(k, 0) = 1.0;
    }
    s.syndrome.push_back(t);
  }

  CodeReport& rep = s.report;
  Vec sample = Vec::Zero(d);
  for (const auto& c : s.codewords) sample += c;
  sample.normalize();
  rep.gram.resize(Eigen::Index(ne), Eigen::Index(ne));
  for (std::size_t f = 0; f < ne; ++f)
    for (std::size_t e = 0; e < ne; ++e)
      rep.gram(Eigen::Index(f), Eigen::Index(e)) = sample.dot(s.errors[f].adjoint() * s.errors[e] * sample);
  rep.gram_defect = (rep.gram - identity(Eigen::Index(ne))).norm();
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t f = e + 1; f < ne; ++f)
      rep.projector_overlap = std::max(rep.projector_overlap, (s.projectors[e] * s.projectors[f]).norm());
  rep.degenerate = rep.projector_overlap > 1e-12 || rep.gram_defect > 1e-10;
  if (rep.projector_overlap > 1e-12) {
    std::ostringstream os;
    os << "build_code: error images of the code overlap (max ||Pi_e Pi_f|| = " << rep.projector_overlap
       << "); the code is degenerate for this error set";
    throw DegenerateCodeError(os.str(), rep);
  }
  return s;
}

QecScenario bit_flip_code() {
  const Vec zero = basis_ket(8, 0), one = basis_ket(8, 7);
  std::vector<Mat> errors{identity(8)};
  for (int k = 0; k < 3; ++k) errors.push_back(qubit_site_op(pauli_x(), k, 3));
  return build_code({zero, one}, std::move(errors), {"I", "X1", "X2", "X3"});
}

RecoveryResult run_recovery(const QecScenario& s, const Vec& psi, const DensityMatrix& rho_a) {
  if (psi.size() != s.system_dim) throw std::invalid_argument("run_recovery: state dimension differs from the code");
  if (rho_a.dim() != s.ancilla_dim)
    throw std::invalid_argument("run_recovery: ancilla state has dimension " + std::to_string(rho_a.dim()) +
                                ", scenario expects " + std::to_string(s.ancilla_dim));
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("run_recovery: state is not normalized");
  if ((s.code_projector() * psi - psi).norm() > 1e-10)
    throw std::invalid_argument("run_recovery: state is not in the code space");

  const Eigen::Index r = s.reservoir_dim();
  Mat rho0 = kron({psi * psi.adjoint(), basis_ket(r, 0) * basis_ket(r, 0).adjoint(), rho_a.matrix()});
  const Mat u = s.recovery_unitary() * s.syndrome_unitary() * s.decoherence_unitary();
  const Mat rho3 = u * rho0 * u.adjoint();
  Mat out = partial_trace(rho3, Factor::first, s.system_dim, r * s.ancilla_dim);
  out = 0.5 * (out + out.adjoint());
  RecoveryResult res{DensityMatrix(out, 1e-10), 0.0};
  res.fidelity = std::real(psi.dot(out * psi));
  return res;
}

double fidelity_prediction(const QecScenario& s, const DensityMatrix& rho_a) {
  if (s.report.degenerate) throw DegenerateCodeError("fidelity_prediction: code is degenerate", s.report);
  if (s.ancilla_dim != s.reservoir_dim())
    throw std::invalid_argument("fidelity_prediction: closed form needs exactly one ancilla flag per error");
  if (rho_a.dim() != s.ancilla_dim) throw std::invalid_argument("fidelity_prediction: ancilla dimension mismatch");
  return std::real(rho_a.matrix()(0, 0));
}

DensityMatrix ancilla_mixture(Eigen::Index dim, double p) {
  if (dim < 2) throw std::invalid_argument("ancilla_mixture: need at least two ancilla levels");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ancilla_mixture: p must lie in [0, 1]");
  Mat m = Mat::Zero(dim, dim);
  m(0, 0) = 1.0 - p;
  m(1, 1) = p;
  return DensityMatrix(m);
}

}  // namespace qmarkov
