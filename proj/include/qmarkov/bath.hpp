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

// Bath spectral functions, correlation functions and KMS checks.
//
// Normalization: a scalar model's value G(w) is used directly as the
// transition-rate density of the Davies generator (rate lambda^2 G(w) for a
// transition that hands energy w to the bath). The correlation function is
// the plain Fourier integral F(t) = int G(w) e^{-iwt} dw over [-cutoff, cutoff],
// without a 1/(2 pi). A matrix model stores Rhat_kl(x) in the convention where
// Rhat multiplies the jump built from the component rotating at +x, so for a
// diagonal model built from scalars Rhat_kk(x) = G_k(-x).

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qmarkov/core.hpp"

namespace qmarkov {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

enum class SpectralKind { flat, bosonic_cubic, tabulated, matrix };

const char* to_string(SpectralKind kind);

// Raised when a spectral function (or spectral matrix) is negative somewhere
// it is sampled; positivity is required for complete positivity.
class BochnerViolation : public Error {
 public:
  BochnerViolation(double omega, double value, const std::string& where);
  double omega() const { return omega_; }
  double value() const { return value_; }

 private:
  double omega_;
  double value_;
};

class SpectralModel {
 public:
  using MatrixFn = std::function<Mat(double)>;

  SpectralKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double cutoff() const { return cutoff_; }
  double amplitude() const { return amplitude_; }
  bool has_cutoff() const { return std::isfinite(cutoff_); }

  // Scalar kinds only.
  double value(double omega) const;
  double operator()(double omega) const { return value(omega); }

  // Matrix kind: Rhat(x). Scalar kinds return the 1x1 matrix [G(-x)].
  Mat matrix_value(double x) const;
  Eigen::Index channels() const { return kind_ == SpectralKind::matrix ? channels_ : 1; }

  const std::vector<double>& table_omega() const { return table_omega_; }
  const std::vector<double>& table_value() const { return table_value_; }

  // Factories
  static SpectralModel flat(double amplitude, double cutoff = std::numeric_limits<double>::infinity(),
                            double beta = 0.0);
  static SpectralModel tabulated(std::vector<double> omega, std::vector<double> g, double beta);
  static SpectralModel matrix(Eigen::Index channels, MatrixFn fn, double beta,
                              double cutoff = std::numeric_limits<double>::infinity());
  // Rhat_kk(x) = G_k(-x), Rhat_kl = 0 for k != l (independent baths).
  static SpectralModel diagonal(const std::vector<SpectralModel>& scalars);
  // Same constant spectral matrix at every frequency.
  static SpectralModel constant_matrix(const Mat& r);

  friend SpectralModel make_bosonic_spectral(double beta, double cutoff, double amplitude);

 private:
  SpectralKind kind_ = SpectralKind::flat;
  double beta_ = 0.0;
  double cutoff_ = std::numeric_limits<double>::infinity();
  double amplitude_ = 0.0;
  std::vector<double> table_omega_;
  std::vector<double> table_value_;
  Eigen::Index channels_ = 1;
  MatrixFn matrix_fn_;
};

// G(w) = amplitude * w^3 / (1 - e^{-beta w}) for |w| <= cutoff, zero beyond.
// The w -> 0 limit is 0. beta = kInfiniteBeta gives amplitude * w^3 for w > 0
// and 0 for w < 0.
SpectralModel make_bosonic_spectral(double beta, double cutoff, double amplitude);

// Parses two numeric columns (omega, g) from CSV text; a header line is skipped
// when its first field is not numeric.
SpectralModel load_tabulated_csv(const std::string& path, double beta);
SpectralModel parse_tabulated_csv(const std::string& text, double beta);

struct KmsReport {
  bool pass = false;
  double max_relative_violation = 0.0;
  double worst_omega = 0.0;
};

// max over samples of |G(-w) - e^{-beta w} G(w)| / (G(w) + eps); pass iff <= tol.
KmsReport kms_check(const SpectralModel& model, const std::vector<double>& sample_points,
                    double tol = 1e-9);

// Samples G on a uniform grid over [-extent, extent] (extent defaults to the
// cutoff, or 10 when none); throws BochnerViolation on a negative value.
void check_bochner(const SpectralModel& model, int samples = 1000, double extent = -1.0);

// F(t) = int_{-cutoff}^{cutoff} G(w) e^{-iwt} dw by Gauss-Legendre quadrature
// on half-oscillation panels, split at table knots (absolute error ~1e-10).
cplx correlation_function(const SpectralModel& model, double t);

struct MemoryEstimate {
  double integral = 0.0;        // int_0^T |F(t)| dt
  double tail_ratio = 0.0;      // I(T/2, T) / I(T/4, T/2)
  bool slow_decay = false;      // tail_ratio above 0.75 (1/t-like tail)
};

using CorrelationFn = std::function<cplx(double)>;

MemoryEstimate l1_memory_estimate(const CorrelationFn& f, double t_max, double resolution);
MemoryEstimate l1_memory_estimate(const SpectralModel& model, double t_max);

}  // namespace qmarkov
