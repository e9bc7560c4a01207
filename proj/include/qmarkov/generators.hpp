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

// Bohr-frequency decomposition and Markovian master-equation generators.

#include <string>
#include <vector>

#include "qmarkov/bath.hpp"
#include "qmarkov/core.hpp"

namespace qmarkov {

// S = sum_w S_w with [H, S_w] = w S_w. Frequencies are sorted ascending and
// clustered with tolerance cluster_tol * (1 + ||H||).
struct BohrDecomposition {
  std::vector<double> frequencies;
  std::vector<Mat> components;
  double tolerance = 0.0;

  Mat sum() const;
};

BohrDecomposition bohr_decompose(const Mat& h, const Mat& s, double cluster_tol = -1.0);

// Groups sorted values whose consecutive gaps are <= tol; returns the cluster
// index of each input value and writes cluster means into `centers`.
std::vector<std::size_t> cluster_values(const std::vector<double>& values, double tol,
                                        std::vector<double>& centers);

struct LindbladTerm {
  double rate = 0.0;
  Mat jump;
  double frequency = 0.0;  // energy handed to the bath by this jump
};

// L(rho) = -i[H, rho] + sum_k rate_k (A_k rho A_k^dag - 1/2 {A_k^dag A_k, rho}).
class LindbladGenerator {
 public:
  LindbladGenerator() = default;
  LindbladGenerator(Mat hamiltonian, std::vector<LindbladTerm> terms);

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  const Mat& hamiltonian() const { return hamiltonian_; }
  const std::vector<LindbladTerm>& terms() const { return terms_; }

  const Superoperator& superop() const { return full_; }
  const Superoperator& dissipator() const { return dissipator_; }
  Mat apply(const Mat& rho) const { return full_.apply(rho); }

  // Minimum eigenvalue of the Choi matrix of exp(t L); >= -tol certifies CP.
  double choi_min_eigenvalue(double t) const;

 private:
  Mat hamiltonian_;
  std::vector<LindbladTerm> terms_;
  Superoperator full_;
  Superoperator dissipator_;
};

struct Coupling {
  Mat op;               // Hermitian system operator S
  double lambda = 1.0;  // coupling strength
};

struct DaviesOptions {
  bool require_kms = true;   // enforce detailed balance at the Bohr frequencies when beta is finite
  bool include_hamiltonian = true;
};

// Davies (weak-coupling) generator; Lamb shift omitted. For each Bohr
// frequency w of S, the component lowering the energy by w is a jump operator
// with rate lambda^2 G(w). Independent baths for distinct couplings.
LindbladGenerator davies_generator(const Mat& h, const std::vector<Coupling>& couplings,
                                   const SpectralModel& model, const DaviesOptions& options = {});

// Singular-coupling generator: -1/2 lambda^2 a [S, [S, rho]] plus -i[H, rho].
LindbladGenerator scl_generator(const Mat& s, double a, double lambda, const Mat& h = Mat());

// || H D - D H ||_F with H = -i[h, .] and D the dissipative part.
double covariance_defect(const LindbladGenerator& gen, const Mat& h);

// Null vector of the superoperator normalized to a unit-trace Hermitian matrix.
Mat stationary_state(const Superoperator& l);

}  // namespace qmarkov
