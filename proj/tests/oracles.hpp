// Copyright 2026 The eedeploy Authors
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

// Brute-force references shared by the unit and acceptance tests.

#ifndef EEDEPLOY_TESTS_ORACLES_HPP
#define EEDEPLOY_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "eedeploy/model.hpp"

namespace eedeploy::testing {

/// Argmax of f on [lo, hi] by exhaustive grid evaluation: 20001 points,
/// then repeated zooms onto the two cells around the best point until the
/// cell width is below 1e-7 of the argument.
template <typename F>
double grid_argmax(F&& f, double lo, double hi) {
  constexpr int n = 20000;
  double best_x = lo;
  for (;;) {
    const double h = (hi - lo) / n;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double x = lo + h * i;
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    if (h < 1e-7 * std::abs(best_x)) return best_x;
    const double nlo = std::max(lo, best_x - h);
    const double nhi = std::min(hi, best_x + h);
    lo = nlo;
    hi = nhi;
  }
}

struct RandomInstance {
  PropagationModel prop;
  HardwareModel hw;
  double m = 0.0;
  double k = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
};

/// Random model, hardware and operating point. rho is infinite for one
/// draw in four.
inline RandomInstance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double a, double b) { return a * std::pow(b / a, u(rng)); };
  RandomInstance r;
  r.prop.alpha = 2.3 + 2.7 * u(rng);
  r.prop.block_len = 100 + static_cast<int>(900 * u(rng));
  r.hw.eta = 0.2 + 0.8 * u(rng);
  r.hw.c0 *= log_uniform(0.1, 10.0);
  r.hw.c1 *= log_uniform(0.1, 10.0);
  r.hw.d0 *= log_uniform(0.1, 10.0);
  r.hw.d1 *= log_uniform(0.1, 10.0);
  r.gamma = log_uniform(0.3, 10.0);
  r.k = log_uniform(0.5, 40.0);
  r.m = log_uniform(1.0, 500.0);
  r.rho = u(rng) < 0.25 ? infinity : r.prop.noise * log_uniform(0.1, 1e6);
  return r;
}

}  // namespace eedeploy::testing

#endif  // EEDEPLOY_TESTS_ORACLES_HPP
