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

#include <random>

#include "qmarkov/core.hpp"

namespace qmarkov::test {

inline double diff(const Mat& a, const Mat& b) { return (a - b).norm(); }

inline std::mt19937_64 rng(unsigned seed = 7) { return std::mt19937_64(seed); }

// Reference superoperator built column by column from the map's action on
// matrix units, independent of any Kronecker identity.
template <class Map>
Mat superop_from_map(Map&& f, Eigen::Index d) {
  Mat out(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      const Mat y = f(e);
      out.col(j * d + i) = Eigen::Map<const Vec>(y.data(), d * d);
    }
  return out;
}

}  // namespace qmarkov::test
