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

#include "qmarkov/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

namespace qmarkov {

Mat BohrDecomposition::sum() const {
  if (components.empty()) return Mat();
  Mat s = Mat::Zero(components.front().rows(), components.front().cols());
  for (const auto& c : components) s += c;
  return s;
}

std::vector<std::size_t> cluster_values(const std::vector<double>& values, double tol,
                                        std::vector<double>& centers) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::size_t> label(values.size(), 0);
  centers.clear();
  std::vector<std::size_t> counts;
  double prev = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = values[order[k]];
    if (k == 0 || v - prev > tol) {
      centers.push_back(0.0);
      counts.push_back(0);
    }
    centers.back() += v;
    counts.back() += 1;
    label[order[k]] = centers.size() - 1;
    prev = v;
  }
  for (std::size_t c = 0; c < centers.size(); ++c) centers[c] /= static_cast<double>(counts[c]);
  return label;
}

BohrDecomposition bohr_decompose(const Mat& h, const Mat& s, double cluster_tol) {
  if (h.rows() != h.cols() || s.rows() != s.cols() || h.rows() != s.rows())
    throw std::invalid_argument("bohr_decompose: H and S must be square with equal dimension");
  if (cluster_tol < 0.0) cluster_tol = Tolerances::defaults().cluster;
  const EigenSystem es = hermitian_eig(h);
  const double hnorm = es.values.cwiseAbs().maxCoeff();
  const double tol = cluster_tol * (1.0 + hnorm);

  // Energy levels (degenerate eigenvalues share one projector).
  std::vector<double> energies(es.values.data(), es.values.data() + es.values.size());
  std::vector<double> levels;
  const auto level_of = cluster_values(energies, tol, levels);
  const std::size_t nl = levels.size();
  std::vector<Mat> proj(nl, Mat::Zero(h.rows(), h.cols()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const Vec v = es.vectors.col(i);
    proj[level_of[static_cast<std::size_t>(i)]] += v * v.adjoint();
  }

  std::vector<double> freqs;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < nl; ++k)
    for (std::size_t l = 0; l < nl; ++l) {
      freqs.push_back(levels[k] - levels[l]);
      pairs.emplace_back(k, l);
    }
  std::vector<double> centers;
  const auto fl = cluster_values(freqs, tol, centers);

  BohrDecomposition out;
  out.tolerance = tol;
  std::vector<Mat> comps(centers.size(), Mat::Zero(h.rows(), h.cols()));
  for (std::size_t p = 0; p < pairs.size(); ++p)
    comps[fl[p]] += proj[pairs[p].first] * s * proj[pairs[p].second];
  const double snorm = s.norm();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (comps[c].norm() <= 1e-14 * (1.0 + snorm)) continue;
    out.frequencies.push_back(centers[c]);
    out.components.push_back(std::move(comps[c]));
  }
  return out;
}

LindbladGenerator::LindbladGenerator(Mat hamiltonian, std::vector<LindbladTerm> terms)
    : hamiltonian_(std::move(hamiltonian)), terms_(std::move(terms)) {
  const Eigen::Index d = hamiltonian_.rows();
  if (hamiltonian_.cols() != d) throw std::invalid_argument("LindbladGenerator: Hamiltonian must be square");
  if (!is_hermitian(hamiltonian_))
    throw StructuralError("LindbladGenerator: Hamiltonian is not Hermitian", hermiticity_deviation(hamiltonian_));
  Mat diss = Mat::Zero(d * d, d * d);
  for (const auto& t : terms_) {
    if (t.jump.rows() != d || t.jump.cols() != d)
      throw std::invalid_argument("LindbladGenerator: jump operator dimension mismatch");
    if (t.rate < 0.0) throw Error("LindbladGenerator: negative rate");
    diss += t.rate * dissipator_superop(t.jump);
  }
  dissipator_ = Superoperator(d, diss);
  full_ = Superoperator(d, hamiltonian_superop(hamiltonian_) + diss);
}

double LindbladGenerator::choi_min_eigenvalue(double t) const {
  const Mat e = matrix_exp(full_.matrix() * t);
  const Mat j = choi(e, dim());
  return min_eigenvalue(0.5 * (j + j.adjoint()));
}

LindbladGenerator davies_generator(const Mat& h, const std::vector<Coupling>& couplings,
                                   const SpectralModel& model, const DaviesOptions& options) {
  if (model.kind() == SpectralKind::matrix)
    throw std::invalid_argument("davies_generator expects a scalar spectral model");
  if (couplings.empty()) throw std::invalid_argument("davies_generator: no couplings");
  const double btol = Tolerances::defaults().bochner;
  std::vector<LindbladTerm> terms;
  std::vector<double> positive_freqs;
  for (const auto& c : couplings) {
    if (!is_hermitian(c.op))
      throw StructuralError("davies_generator: coupling operator is not Hermitian", hermiticity_deviation(c.op));
    const BohrDecomposition bd = bohr_decompose(h, c.op);
    for (std::size_t k = 0; k < bd.frequencies.size(); ++k) {
      // Component k raises the energy by nu; as a jump it hands -nu to the bath.
      const double to_bath = -bd.frequencies[k];
      const double g = model.value(to_bath);
      if (g < -btol) throw BochnerViolation(to_bath, g, "davies_generator");
      if (to_bath > 0.0) positive_freqs.push_back(to_bath);
      const double rate = c.lambda * c.lambda * std::max(g, 0.0);
      if (rate == 0.0) continue;
      terms.push_back({rate, bd.components[k], to_bath});
    }
  }
  if (options.require_kms && std::isfinite(model.beta()) && model.beta() > 0.0 && !positive_freqs.empty()) {
    const KmsReport r = kms_check(model, positive_freqs);
    if (!r.pass) {
      std::ostringstream os;
      os << "davies_generator: spectral model violates KMS at omega = " << r.worst_omega
         << " (relative violation " << r.max_relative_violation << ")";
      throw Error(os.str());
    }
  }
  Mat hs = options.include_hamiltonian ? h : Mat::Zero(h.rows(), h.cols()).eval();
  return LindbladGenerator(std::move(hs), std::move(terms));
}

LindbladGenerator scl_generator(const Mat& s, double a, double lambda, const Mat& h) {
  if (!is_hermitian(s))
    throw StructuralError("scl_generator: coupling operator is not Hermitian", hermiticity_deviation(s));
  if (a < 0.0) throw BochnerViolation(0.0, a, "scl_generator (white-noise strength)");
  Mat hs = h.size() == 0 ? Mat::Zero(s.rows(), s.cols()).eval() : h;
  std::vector<LindbladTerm> terms;
  if (a * lambda * lambda > 0.0) terms.push_back({a * lambda * lambda, s, 0.0});
  return LindbladGenerator(std::move(hs), std::move(terms));
}

double covariance_defect(const LindbladGenerator& gen, const Mat& h) {
  const Mat hs = hamiltonian_superop(h);
  const Mat& d = gen.dissipator().matrix();
  return (hs * d - d * hs).norm();
}

Mat stationary_state(const Superoperator& l) {
  Eigen::BDCSVD<Mat> svd(l.matrix(), Eigen::ComputeFullV);
  const Vec v = svd.matrixV().col(svd.matrixV().cols() - 1);
  Mat rho = unvec(v, l.dim());
  const cplx tr = rho.trace();
  if (std::abs(tr) > 1e-300) rho /= tr;
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qmarkov
