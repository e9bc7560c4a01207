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

#include "qmarkov/bath.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace qmarkov {

const char* to_string(SpectralKind kind) {
  switch (kind) {
    case SpectralKind::flat: return "flat";
    case SpectralKind::bosonic_cubic: return "bosonic_cubic";
    case SpectralKind::tabulated: return "tabulated";
    case SpectralKind::matrix: return "matrix";
  }
  return "unknown";
}

namespace {

std::string bochner_message(double omega, double value, const std::string& where) {
  std::ostringstream os;
  os << "Bochner violation in " << where << ": spectral value " << value << " < 0 at omega = " << omega;
  return os.str();
}

}  // namespace

BochnerViolation::BochnerViolation(double omega, double value, const std::string& where)
    : Error(bochner_message(omega, value, where)), omega_(omega), value_(value) {}

double SpectralModel::value(double omega) const {
  if (std::abs(omega) > cutoff_) return 0.0;
  switch (kind_) {
    case SpectralKind::flat:
      return amplitude_;
    case SpectralKind::bosonic_cubic: {
      if (omega == 0.0) return 0.0;
      if (std::isinf(beta_)) return omega > 0.0 ? amplitude_ * omega * omega * omega : 0.0;
      // w^3 / (1 - e^{-beta w}) written with expm1 for accuracy near w = 0.
      return amplitude_ * omega * omega * omega / (-std::expm1(-beta_ * omega));
    }
    case SpectralKind::tabulated: {
      const auto& x = table_omega_;
      const auto& y = table_value_;
      if (omega < x.front() || omega > x.back()) return 0.0;
      auto it = std::upper_bound(x.begin(), x.end(), omega);
      if (it == x.end()) return y.back();
      const auto i = static_cast<std::size_t>(it - x.begin());
      const double x0 = x[i - 1], x1 = x[i];
      const double w = (omega - x0) / (x1 - x0);
      return (1.0 - w) * y[i - 1] + w * y[i];
    }
    case SpectralKind::matrix:
      throw Error("SpectralModel::value called on a matrix-valued model");
  }
  return 0.0;
}

Mat SpectralModel::matrix_value(double x) const {
  if (kind_ == SpectralKind::matrix) {
    Mat r = matrix_fn_(x);
    if (r.rows() != channels_ || r.cols() != channels_)
      throw Error("spectral matrix function returned a matrix of the wrong size");
    return r;
  }
  Mat r(1, 1);
  r(0, 0) = value(-x);
  return r;
}

SpectralModel SpectralModel::flat(double amplitude, double cutoff, double beta) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("flat spectral model: cutoff must be positive");
  SpectralModel m;
  m.kind_ = SpectralKind::flat;
  m.amplitude_ = amplitude;
  m.cutoff_ = cutoff;
  m.beta_ = beta;
  return m;
}

SpectralModel SpectralModel::tabulated(std::vector<double> omega, std::vector<double> g, double beta) {
  if (omega.size() != g.size()) throw std::invalid_argument("tabulated spectral model: column length mismatch");
  if (omega.size() < 2) throw std::invalid_argument("tabulated spectral model: need at least two rows");
  for (std::size_t i = 1; i < omega.size(); ++i)
    if (!(omega[i] > omega[i - 1]))
      throw std::invalid_argument("tabulated spectral model: omega must be strictly increasing");
  SpectralModel m;
  m.kind_ = SpectralKind::tabulated;
  m.beta_ = beta;
  m.cutoff_ = std::max(std::abs(omega.front()), std::abs(omega.back()));
  m.amplitude_ = *std::max_element(g.begin(), g.end());
  m.table_omega_ = std::move(omega);
  m.table_value_ = std::move(g);
  return m;
}

SpectralModel SpectralModel::matrix(Eigen::Index channels, MatrixFn fn, double beta, double cutoff) {
  if (channels < 1) throw std::invalid_argument("matrix spectral model: need at least one channel");
  SpectralModel m;
  m.kind_ = SpectralKind::matrix;
  m.channels_ = channels;
  m.matrix_fn_ = std::move(fn);
  m.beta_ = beta;
  m.cutoff_ = cutoff;
  return m;
}

SpectralModel SpectralModel::diagonal(const std::vector<SpectralModel>& scalars) {
  if (scalars.empty()) throw std::invalid_argument("diagonal spectral model: no channels");
  double cutoff = 0.0;
  for (const auto& s : scalars) {
    if (s.kind() == SpectralKind::matrix)
      throw std::invalid_argument("diagonal spectral model: channels must be scalar models");
    cutoff = std::max(cutoff, s.cutoff());
  }
  const auto n = static_cast<Eigen::Index>(scalars.size());
  auto fn = [scalars, n](double x) {
    Mat r = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) r(k, k) = scalars[static_cast<std::size_t>(k)].value(-x);
    return r;
  };
  return matrix(n, fn, scalars.front().beta(), cutoff);
}

SpectralModel SpectralModel::constant_matrix(const Mat& r) {
  if (r.rows() != r.cols()) throw std::invalid_argument("constant spectral matrix must be square");
  return matrix(r.rows(), [r](double) { return r; }, 0.0);
}

SpectralModel make_bosonic_spectral(double beta, double cutoff, double amplitude) {
  if (!(beta > 0.0)) throw std::invalid_argument("bosonic spectral model: beta must be positive");
  if (!(cutoff > 0.0)) throw std::invalid_argument("bosonic spectral model: cutoff must be positive");
  SpectralModel m;
  m.kind_ = SpectralKind::bosonic_cubic;
  m.beta_ = beta;
  m.cutoff_ = cutoff;
  m.amplitude_ = amplitude;
  return m;
}

SpectralModel parse_tabulated_csv(const std::string& text, double beta) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> omega, g;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0.0, b = 0.0;
    if (!(fields >> a >> b)) {
      if (omega.empty() && lineno == 1) continue;  // header
      throw std::invalid_argument("tabulated spectral CSV: malformed row at line " + std::to_string(lineno));
    }
    omega.push_back(a);
    g.push_back(b);
  }
  return SpectralModel::tabulated(std::move(omega), std::move(g), beta);
}

SpectralModel load_tabulated_csv(const std::string& path, double beta) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open spectral table " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_tabulated_csv(ss.str(), beta);
}

KmsReport kms_check(const SpectralModel& model, const std::vector<double>& sample_points, double tol) {
  if (model.kind() == SpectralKind::matrix) throw std::invalid_argument("kms_check expects a scalar model");
  KmsReport r;
  constexpr double eps = 1e-300;
  for (double w : sample_points) {
    const double gp = model.value(w);
    const double gm = model.value(-w);
    const double boltz = std::isinf(model.beta()) ? (w > 0 ? 0.0 : (w < 0 ? kInfiniteBeta : 1.0))
                                                  : std::exp(-model.beta() * w);
    double violation = 0.0;
    if (std::isinf(boltz)) {
      violation = gp == 0.0 ? 0.0 : kInfiniteBeta;
    } else {
      violation = std::abs(gm - boltz * gp) / (std::abs(gp) + eps);
    }
    if (violation > r.max_relative_violation) {
      r.max_relative_violation = violation;
      r.worst_omega = w;
    }
  }
  r.pass = r.max_relative_violation <= tol;
  return r;
}

void check_bochner(const SpectralModel& model, int samples, double extent) {
  if (samples < 2) throw std::invalid_argument("check_bochner: need at least two samples");
  if (extent <= 0.0) extent = model.has_cutoff() ? model.cutoff() : 10.0;
  const double tol = Tolerances::defaults().bochner;
  for (int i = 0; i < samples; ++i) {
    const double w = -extent + 2.0 * extent * i / (samples - 1);
    if (model.kind() == SpectralKind::matrix) {
      Mat r = model.matrix_value(w);
      const double lo = min_eigenvalue(0.5 * (r + r.adjoint()));
      if (lo < -tol) throw BochnerViolation(w, lo, "spectral matrix");
    } else {
      const double g = model.value(w);
      if (g < -tol) throw BochnerViolation(w, g, std::string("spectral function (") + to_string(model.kind()) + ")");
    }
  }
}

namespace {

// Panel edges on [-c, c]: one panel per half oscillation of e^{-iwt}, plus
// every table knot for tabulated models so kinks sit on panel boundaries.
std::vector<double> quadrature_edges(const SpectralModel& model, double t) {
  const double c = model.cutoff();
  const int n_osc = static_cast<int>(std::ceil(c * std::abs(t) / kPi));
  const int panels = std::max(8, 2 * n_osc);
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(panels) + model.table_omega().size() + 1);
  for (int i = 0; i <= panels; ++i) edges.push_back(-c + 2.0 * c * i / panels);
  const auto& knots = model.table_omega();
  if (!knots.empty() && knots.size() <= 4096)
    for (double k : knots)
      if (k > -c && k < c) edges.push_back(k);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [c](double a, double b) { return std::abs(a - b) < 1e-15 * (1.0 + c); }),
              edges.end());
  return edges;
}

}  // namespace

cplx correlation_function(const SpectralModel& model, double t) {
  if (model.kind() == SpectralKind::matrix)
    throw std::invalid_argument("correlation_function expects a scalar spectral model");
  if (!model.has_cutoff())
    throw std::invalid_argument("correlation_function needs a finite cutoff");
  using boost::math::quadrature::gauss;
  // Fixed 30-point Gauss-Legendre on panels no wider than half an oscillation;
  // smooth pieces converge far below 1e-10 and kinks sit on panel edges.
  const auto edges = quadrature_edges(model, t);
  double re = 0.0, im = 0.0;
  auto fre = [&](double w) { return model.value(w) * std::cos(w * t); };
  auto fim = [&](double w) { return -model.value(w) * std::sin(w * t); };
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    re += gauss<double, 30>::integrate(fre, a, b);
    if (t != 0.0) im += gauss<double, 30>::integrate(fim, a, b);
  }
  return {re, im};
}

MemoryEstimate l1_memory_estimate(const CorrelationFn& f, double t_max, double resolution) {
  if (!(t_max > 0.0)) throw std::invalid_argument("l1_memory_estimate: t_max must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("l1_memory_estimate: resolution must be positive");
  using boost::math::quadrature::gauss;
  // Panel count divisible by 4 so the dyadic windows T/4, T/2, T land on edges.
  int panels = static_cast<int>(std::ceil(t_max / resolution));
  panels = std::max(16, ((panels + 3) / 4) * 4);
  const double h = t_max / panels;
  std::vector<double> part(static_cast<std::size_t>(panels));
  auto absf = [&](double t) { return std::abs(f(t)); };
  for (int i = 0; i < panels; ++i) part[static_cast<std::size_t>(i)] = gauss<double, 10>::integrate(absf, i * h, (i + 1) * h);
  auto sum = [&](int a, int b) {
    double s = 0.0;
    for (int i = a; i < b; ++i) s += part[static_cast<std::size_t>(i)];
    return s;
  };
  MemoryEstimate m;
  m.integral = sum(0, panels);
  const double q2 = sum(panels / 4, panels / 2);
  const double q3 = sum(panels / 2, panels);
  m.tail_ratio = q2 > 0.0 ? q3 / q2 : 0.0;
  m.slow_decay = m.tail_ratio > 0.75;
  return m;
}

MemoryEstimate l1_memory_estimate(const SpectralModel& model, double t_max) {
  const double resolution = kPi / (4.0 * model.cutoff());
  return l1_memory_estimate([&](double t) { return correlation_function(model, t); }, t_max,
                            std::min(resolution, t_max / 16.0));
}

}  // namespace qmarkov
