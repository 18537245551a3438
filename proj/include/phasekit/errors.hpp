// Copyright 2026 The phasekit Authors
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

#include <stdexcept>
#include <string>

namespace phasekit {

/// Bad argument: negative photon number, angle outside the family, etc.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Kennedy angle exceeds pi/4 because the reference is weaker than the
/// signal. Swapping the roles of signal and reference gives a valid setup.
class out_of_family_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Invalid Monte Carlo configuration (rule/angle mismatch, zero trials).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A truncation exceeded a configured ceiling.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The eigensolver ran out of sweeps.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace phasekit
