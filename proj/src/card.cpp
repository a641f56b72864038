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

#include "asymsim/card.hpp"

#include <sstream>

namespace asymsim {

namespace {

constexpr const char* kUnstated = "_not stated_";

std::string text_at(const json& doc, const json::json_pointer& ptr) {
  if (!doc.is_object() || !doc.contains(ptr)) return {};
  const json& v = doc.at(ptr);
  return v.is_string() ? v.get<std::string>() : std::string();
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace

std::string describe_information_asymmetry(SimulationMode mode, const VisibilityPolicy& policy) {
  if (mode == SimulationMode::kScript) {
    return "none; a single omniscient generator writes both sides and sees both goals and "
           "secrets";
  }
  std::ostringstream out;
  out << (mode == SimulationMode::kAgents ? "Agents" : "Mindreaders")
      << ": each side is generated by its own model call; partner goal visible: "
      << yes_no(policy.show_partner_goal)
      << "; partner secret visible: " << yes_no(policy.show_partner_secret)
      << "; own secret visible: " << yes_no(policy.show_own_secret) << "; profiles: "
      << (policy.profile_detail == ProfileDetail::kFull ? "full" : "name only");
  return out.str();
}

std::string render_simulation_card(const RunManifest& manifest, const json& freetext,
                                   bool strict) {
  using P = json::json_pointer;
  const std::string primary = text_at(freetext, P("/intended_use/primary"));
  const std::string ethics = text_at(freetext, P("/ethical_considerations"));
  const std::string caveats = text_at(freetext, P("/caveats"));
  if (strict) {
    if (primary.empty()) throw MissingSection("intended_use.primary");
    if (ethics.empty()) throw MissingSection("ethical_considerations");
    if (caveats.empty()) throw MissingSection("caveats");
  }
  auto or_unstated = [](const std::string& s) { return s.empty() ? std::string(kUnstated) : s; };

  std::string agent_type = "prompt-based LLM (profile " + manifest.profile + ", model " +
                           manifest.model + ")";
  std::string features = "detailed character profiles with public info and secrets; "
                         "max " + std::to_string(manifest.engine.max_turns) + " turns";
  if (const std::string extra = text_at(freetext, P("/other_features")); !extra.empty()) {
    features += "; " + extra;
  }

  std::string fidelity = text_at(freetext, P("/metrics/fidelity"));
  if (fidelity.empty()) {
    fidelity = "verbosity (tokens per turn), first-mention position of the target name, "
               "blinded pairwise naturalness preference";
  }
  std::string judge = manifest.judge_model.empty()
                          ? std::string("LLM judge (not yet run)")
                          : "LLM judge " + manifest.judge_model + ", " + manifest.rubric_version;
  std::string goal = text_at(freetext, P("/metrics/goal_achievement"));
  if (goal.empty()) goal = "GOAL dimension (0 to 10) and deal rate; " + judge;
  std::string norms = text_at(freetext, P("/metrics/norms_safety"));
  if (norms.empty()) norms = "SEC and SOC dimensions (-10 to 0); " + judge;

  std::ostringstream out;
  out << "# Social Simulation Card\n\n"
      << "Run `" << manifest.run_id << "`, mode " << to_string(manifest.mode) << ", "
      << manifest.episodes.size() << " episodes.\n\n";
  out << "## Simulation Details\n\n"
      << "- Single or multi-agent: multi-agent (two characters)\n";
  if (manifest.mode == SimulationMode::kScript) {
    out << "- Generation: single omniscient generator produces the whole interaction\n";
  }
  out << "- Information asymmetry: "
      << describe_information_asymmetry(manifest.mode, manifest.policy) << "\n"
      << "- Agent type: " << agent_type << "\n"
      << "- Modalities: text\n"
      << "- Humans in the loop: "
      << (manifest.annotations_imported ? "yes (human naturalness annotations imported)"
                                        : "no")
      << "\n"
      << "- Simulation platform: asymsim " << manifest.artifact_version << "\n"
      << "- Targeted domain: " << or_unstated(text_at(freetext, P("/targeted_domain"))) << "\n"
      << "- Other features: " << features << "\n\n";
  out << "## Intended Use\n\n"
      << "- Primary intended uses: " << or_unstated(primary) << "\n"
      << "- Other potential use cases: "
      << or_unstated(text_at(freetext, P("/intended_use/other"))) << "\n\n";
  out << "## Metrics\n\n"
      << "- Human-like interaction fidelity: " << fidelity << "\n"
      << "- Goal achievement: " << goal << "\n"
      << "- Social norms and safety: " << norms << "\n\n";
  out << "## Ethical Considerations\n\n" << or_unstated(ethics) << "\n\n";
  out << "## Caveats and Recommendations\n\n" << or_unstated(caveats) << "\n";
  return out.str();
}

}  // namespace asymsim
