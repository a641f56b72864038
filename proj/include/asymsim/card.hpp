// Copyright 2026 The Asymsim Authors.
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

// Social simulation card: a markdown report of how a run was configured.

#ifndef ASYMSIM_CARD_HPP_
#define ASYMSIM_CARD_HPP_

#include <stdexcept>
#include <string>

#include "asymsim/run.hpp"

namespace asymsim {

class MissingSection : public std::runtime_error {
 public:
  explicit MissingSection(const std::string& section)
      : std::runtime_error("simulation card section missing: " + section), section_(section) {}
  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

// Free-text keys: targeted_domain, other_features, intended_use.primary,
// intended_use.other, metrics.fidelity, metrics.goal_achievement,
// metrics.norms_safety, ethical_considerations, caveats.
// In strict mode intended_use.primary, ethical_considerations and caveats
// must be present and non-empty.
std::string render_simulation_card(const RunManifest& manifest, const json& freetext,
                                   bool strict = false);

std::string describe_information_asymmetry(SimulationMode mode, const VisibilityPolicy& policy);

}  // namespace asymsim

#endif  // ASYMSIM_CARD_HPP_
