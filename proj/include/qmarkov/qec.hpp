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

// Error correction with possibly mixed ancillas: preparation, a uniform
// unitary dilation of the error channel onto a flag reservoir, syndrome
// extraction onto the ancilla and unitary recovery, executed exactly on
// S (x) R (x) A.

#include <string>
#include <vector>

#include "qmarkov/core.hpp"

namespace qmarkov {

struct CodeReport {
  Mat gram;                     // <psi|U_f^dag U_e|psi> for the sampled codeword
  double gram_defect = 0.0;     // || gram - I ||_F
  double projector_overlap = 0.0;  // max_{e != f} || Pi_e Pi_f ||_F
  bool degenerate = false;
};

class DegenerateCodeError : public Error {
 public:
  DegenerateCodeError(const std::string& what, CodeReport report);
  const CodeReport& report() const { return report_; }

 private:
  CodeReport report_;
};

struct QecScenario {
  Eigen::Index system_dim = 0;
  std::vector<Vec> codewords;
  std::vector<Mat> errors;
  std::vector<std::string> labels;
  Eigen::Index ancilla_dim = 0;
  std::vector<Mat> projectors;  // Pi_e onto U_e(code)
  std::vector<Mat> syndrome;    // T_e: swaps |0_A> and |e_A>
  CodeReport report;

  std::size_t error_count() const { return errors.size(); }
  Eigen::Index reservoir_dim() const { return static_cast<Eigen::Index>(errors.size()); }
  Eigen::Index total_dim() const { return system_dim * reservoir_dim() * ancilla_dim; }
  Mat code_projector() const;

  // Unitaries on S (x) R (x) A, in that tensor order.
  Mat decoherence_unitary() const;   // sum_e U_e (x) |e_R><e_R| composed with the reservoir Fourier transform
  Mat syndrome_unitary() const;      // sum_e Pi_e (x) I_R (x) T_e, identity off the syndrome sectors
  Mat recovery_unitary() const;      // sum_f U_f^dag (x) I_R (x) |f_A><f_A|, identity off the flags
};

// Validates codewords (orthonormal to 1e-12), errors (unitary, linearly
// independent) and builds the syndrome projectors. Throws
// DegenerateCodeError when two error images of the code overlap.
QecScenario build_code(std::vector<Vec> codewords, std::vector<Mat> errors, std::vector<std::string> labels = {},
                       Eigen::Index ancilla_dim = 0);

// |000>, |111> with errors I, X1, X2, X3.
QecScenario bit_flip_code();

struct RecoveryResult {
  DensityMatrix rho_out;
  double fidelity = 0.0;
};

RecoveryResult run_recovery(const QecScenario& scenario, const Vec& psi, const DensityMatrix& rho_a);

// <0_A|rho_A|0_A>; requires a non-degenerate code whose ancilla holds exactly
// one flag per error.
double fidelity_prediction(const QecScenario& scenario, const DensityMatrix& rho_a);

// (1 - p)|0_A><0_A| + p|x_A><x_A| with x = 1.
DensityMatrix ancilla_mixture(Eigen::Index dim, double p);

}  // namespace qmarkov
