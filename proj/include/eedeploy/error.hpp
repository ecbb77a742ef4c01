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

#ifndef EEDEPLOY_ERROR_HPP
#define EEDEPLOY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eedeploy {

/// A parameter lies outside the domain where the model is defined
/// (alpha <= 2, beta < 1, non-positive rho, ...).
class parameter_error : public std::domain_error {
public:
  explicit parameter_error(const std::string& what) : std::domain_error(what) {}
};

/// The requested operating point cannot satisfy the SINR target or the
/// pilot/coherence-block constraint.
class infeasible_error : public std::runtime_error {
public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// The energy model is degenerate (zero area energy consumption).
class degenerate_model_error : public std::runtime_error {
public:
  explicit degenerate_model_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eedeploy

#endif  // EEDEPLOY_ERROR_HPP
