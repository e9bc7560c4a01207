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

#include "qmarkov/ode.hpp"

#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace qmarkov {

std::vector<Vec> integrate_ode(const OdeRhs& rhs, const Vec& y0, const std::vector<double>& times,
                               const OdeOptions& options, std::size_t* steps) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<cplx>;
  if (times.empty()) return {};
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1]) throw std::invalid_argument("integrate_ode: times must be non-decreasing");

  const auto n = y0.size();
  State x(y0.data(), y0.data() + n);
  Vec yin(n), dy(n);
  auto system = [&](const State& s, State& ds, double t) {
    yin = Eigen::Map<const Vec>(s.data(), n);
    rhs(t, yin, dy);
    ds.assign(dy.data(), dy.data() + n);
  };
  std::vector<Vec> out;
  out.reserve(times.size());
  auto observer = [&](const State& s, double) { out.emplace_back(Eigen::Map<const Vec>(s.data(), n)); };

  if (times.back() == times.front()) {
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(y0);
    if (steps) *steps = 0;
    return out;
  }
  auto stepper = odeint::make_dense_output(options.atol, options.rtol, odeint::runge_kutta_dopri5<State>());
  const double dt = std::min(options.first_step, times.back() - times.front());
  const std::size_t count = odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt, observer);
  if (steps) *steps = count;
  return out;
}

}  // namespace qmarkov
