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

// Adaptive Dormand-Prince integration of complex linear and nonlinear ODEs.

#include <cstddef>
#include <functional>
#include <vector>

#include "qmarkov/core.hpp"

namespace qmarkov {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double first_step = 1e-3;
};

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

// Returns the solution at every entry of `times` (non-decreasing, starting at
// the initial time). `steps` receives the accepted step count.
std::vector<Vec> integrate_ode(const OdeRhs& rhs, const Vec& y0, const std::vector<double>& times,
                               const OdeOptions& options = {}, std::size_t* steps = nullptr);

}  // namespace qmarkov
