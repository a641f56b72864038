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

// Prompt rendering for the interactive modes and the omniscient script mode.
// Templates are reproduced byte-for-byte; what a generation call may see is
// decided solely by VisibilityPolicy.

#ifndef ASYMSIM_PROMPT_HPP_
#define ASYMSIM_PROMPT_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "asymsim/domain.hpp"

namespace asymsim {

enum class ProfileDetail { kFull, kNameOnly };

struct VisibilityPolicy {
  bool show_partner_goal = false;
  bool show_partner_secret = true;
  bool show_own_secret = true;
  ProfileDetail profile_detail = ProfileDetail::kFull;

  static VisibilityPolicy agents_default() { return {false, true, true, ProfileDetail::kFull}; }
  static VisibilityPolicy mindreaders_default() { return {true, true, true, ProfileDetail::kFull}; }
  static VisibilityPolicy omniscient() { return {true, true, true, ProfileDetail::kFull}; }
  static VisibilityPolicy for_mode(SimulationMode mode);

  bool operator==(const VisibilityPolicy&) const = default;
};

void to_json(json& j, const VisibilityPolicy& p);
void from_json(const json& j, VisibilityPolicy& p);

enum class Role { kSystem, kUser };

struct PromptSegment {
  Role role = Role::kUser;
  std::string text;

  bool operator==(const PromptSegment&) const = default;
};

struct PromptText {
  std::vector<PromptSegment> segments;

  static PromptText user(std::string text) { return PromptText{{{Role::kUser, std::move(text)}}}; }
  // All segments concatenated in order.
  std::string text() const;

  bool operator==(const PromptText&) const = default;
};

std::string_view to_string(Role role);

// `<Name> said: "<arg>"`, `<Name> [action] <arg>`, and so on.
std::string render_turn_line(const Turn& turn, std::string_view speaker_name);

// One rendered line per turn, each terminated by a newline.
std::string render_history(const std::vector<Turn>& turns, const SocialTask& task);

std::string render_background(const CharacterProfile& profile, bool show_secret,
                              ProfileDetail detail);

// Pieces of an interactive-mode prompt. The finetune exporter stores these
// and reassembles them with the same function the live engine uses.
struct AgentPromptParts {
  int viewer = 0;
  SimulationMode mode = SimulationMode::kAgents;  // Mindreaders keeps its own wording
  std::array<std::string, 2> names;
  std::string context;  // scenario, participants, backgrounds
  std::string goal;     // viewer's goal, verbatim
  std::string partner_goal;
  std::string history;  // render_history output
  int turn_no = 0;
  std::string style_addendum;

  bool operator==(const AgentPromptParts&) const = default;
};

std::string agent_instruction(std::string_view name);

AgentPromptParts agent_prompt_parts(const SocialTask& task, int viewer, SimulationMode mode,
                                    const std::vector<Turn>& history, int turn_no,
                                    const VisibilityPolicy& policy,
                                    std::string_view style_addendum = {});

std::string assemble_agent_prompt(const AgentPromptParts& parts);

// Throws std::invalid_argument if mode is Script, viewer is not 0/1, or
// turn_no differs from history.size().
PromptText build_agent_prompt(const SocialTask& task, int viewer, SimulationMode mode,
                              const std::vector<Turn>& history, int turn_no,
                              const VisibilityPolicy& policy,
                              std::string_view style_addendum = {});

PromptText build_script_prompt(const SocialTask& task, int max_turns = 20);

}  // namespace asymsim

#endif  // ASYMSIM_PROMPT_HPP_
