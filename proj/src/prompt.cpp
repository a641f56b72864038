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

#include "asymsim/prompt.hpp"

#include <sstream>
#include <stdexcept>

namespace asymsim {

namespace {

constexpr std::string_view kActionBanner =
    "Your available action types are\n"
    "action none non-verbal communication speak leave.\n"
    "Note: You can \"leave\" this conversation if 1. you have achieved your social goals, "
    "2. this conversation makes you uncomfortable, 3. you find it uninteresting/you lose "
    "your patience, 4. or for other reasons you want to leave.\n";

constexpr std::string_view kFormatBlock = R"(
Please only generate a JSON string including the action type and the argument.
Your action should follow the given format:
The output should be formatted as a JSON instance that conforms to the JSON schema below.

As an example, for the schema {"properties": {"foo": {"title": "Foo", "description": "a list of strings", "type": "array", "items": {"type": "string"}}}, "required": ["foo"]}
the object {"foo": ["bar", "baz"]} is a well-formatted instance of the schema. The object {"properties": {"foo": ["bar", "baz"]}} is not well-formatted.

Here is the output schema:
```
{"description": "An interface for messages.\nThere is only one required method: to_natural_language", "properties": {"action_type": {"title": "Action Type", "description": "whether to speak at this turn or choose to not do anything", "enum": ["none", "speak", "non-verbal communication", "action", "leave"], "type": "string"}, "argument": {"title": "Argument", "description": "the utterance if choose to speak, the expression or gesture if choose non-verbal communication, or the physical action if choose action", "type": "string"}}, "required": ["action_type", "argument"]}
```)";

constexpr std::string_view kScriptRules = R"(You can use different types of actions in the part, but PLEASE follows the rule STRICTLY. Remember to include the square brackets when doing an action as stated in the instructions.
1. Use "did nothing" if the agent did nothing.
2. Use "said: "{self.argument}" if the agent want to say, ask or inquire something.
3. Use "[non-verbal communication] {self.argument}" if the agent did non-verbal communication.
4. Use "[action] {self.argument}" if the agent did an action.
5. Use "left the conversation" if the agent left the conversation. And you should stop generation

For example, the following outputs are valid:
a. Oliver Thompson said: "What's wrong? You seem upset."
b. Esmeralda Solis [action] moved closer
c. Oliver Thompson [non-verbal communication] smiled
e. Esmeralda Solis did nothing
f. Oliver Thompson left the conversation
Remember that you are an independent scriptwriter and should finish the script by yourself.
The output should only contain the script following the format instructions, with no additional comments or text.)";

std::string first_token(std::string_view name) {
  size_t space = name.find(' ');
  return std::string(space == std::string_view::npos ? name : name.substr(0, space));
}

std::string render_context(const SocialTask& task, int viewer, const VisibilityPolicy& policy) {
  std::string out;
  out += "Scenario: " + task.scenario + "\n";
  out += "Participants: " + task.participants[0].name + " and " + task.participants[1].name + "\n";
  if (!task.relationship.empty()) out += "Relationship: " + task.relationship + "\n";
  for (int i = 0; i < 2; ++i) {
    bool show_secret = (i == viewer) ? policy.show_own_secret : policy.show_partner_secret;
    const auto& who = task.participants[i];
    out += who.name + "'s background: " +
           render_background(who, show_secret, policy.profile_detail) + "\n";
  }
  return out;
}

}  // namespace

VisibilityPolicy VisibilityPolicy::for_mode(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::kAgents: return agents_default();
    case SimulationMode::kMindreaders: return mindreaders_default();
    case SimulationMode::kScript: return omniscient();
  }
  return agents_default();
}

void to_json(json& j, const VisibilityPolicy& p) {
  j = json{{"show_partner_goal", p.show_partner_goal},
           {"show_partner_secret", p.show_partner_secret},
           {"show_own_secret", p.show_own_secret},
           {"profile_detail", p.profile_detail == ProfileDetail::kFull ? "full" : "name_only"}};
}

void from_json(const json& j, VisibilityPolicy& p) {
  p.show_partner_goal = j.at("show_partner_goal").get<bool>();
  p.show_partner_secret = j.at("show_partner_secret").get<bool>();
  p.show_own_secret = j.at("show_own_secret").get<bool>();
  p.profile_detail =
      j.at("profile_detail").get<std::string>() == "name_only" ? ProfileDetail::kNameOnly
                                                               : ProfileDetail::kFull;
}

std::string PromptText::text() const {
  std::string out;
  for (const auto& segment : segments) out += segment.text;
  return out;
}

std::string_view to_string(Role role) { return role == Role::kSystem ? "system" : "user"; }

std::string render_turn_line(const Turn& turn, std::string_view speaker_name) {
  std::string name(speaker_name);
  switch (turn.action) {
    case ActionType::kSpeak: return name + " said: \"" + turn.argument + "\"";
    case ActionType::kAction: return name + " [action] " + turn.argument;
    case ActionType::kNonVerbal: return name + " [non-verbal communication] " + turn.argument;
    case ActionType::kNone: return name + " did nothing";
    case ActionType::kLeave: return name + " left the conversation";
  }
  return name + " did nothing";
}

std::string render_history(const std::vector<Turn>& turns, const SocialTask& task) {
  std::string out;
  for (const auto& turn : turns) {
    out += render_turn_line(turn, task.participants.at(turn.speaker).name);
    out += '\n';
  }
  return out;
}

std::string render_background(const CharacterProfile& profile, bool show_secret,
                              ProfileDetail detail) {
  if (detail == ProfileDetail::kNameOnly) return profile.name + " is a person.";
  std::vector<std::string> descriptor;
  if (profile.age) descriptor.push_back(std::to_string(*profile.age) + "-year-old");
  if (!profile.gender.empty()) descriptor.push_back(profile.gender);
  if (!profile.occupation.empty()) descriptor.push_back(profile.occupation);

  std::vector<std::string> sentences;
  if (!descriptor.empty()) {
    std::string s = profile.name + " is a";
    for (const auto& d : descriptor) s += " " + d;
    sentences.push_back(s + ".");
  }
  if (!profile.gender_pronouns.empty()) sentences.push_back(profile.gender_pronouns + " pronouns.");
  if (!profile.public_info.empty()) sentences.push_back(profile.public_info);
  if (!profile.personality_and_values.empty()) {
    sentences.push_back("Personality and values description: " + profile.personality_and_values);
  }
  if (show_secret && !profile.secret.empty()) {
    sentences.push_back(first_token(profile.name) + "'s secrets: " + profile.secret);
  }
  if (sentences.empty()) return profile.name + " is a person.";
  std::string out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += ' ';
    out += sentences[i];
  }
  return out;
}

std::string agent_instruction(std::string_view name) {
  std::string n(name);
  return "Imagine you are " + n + ", your task is to act/speak as " + n +
         " would, keeping in mind " + n + "'s social goal.";
}

AgentPromptParts agent_prompt_parts(const SocialTask& task, int viewer, SimulationMode mode,
                                    const std::vector<Turn>& history, int turn_no,
                                    const VisibilityPolicy& policy,
                                    std::string_view style_addendum) {
  if (mode == SimulationMode::kScript) {
    throw std::invalid_argument("agent prompts are not defined for script mode");
  }
  if (viewer != 0 && viewer != 1) throw std::invalid_argument("viewer must be 0 or 1");
  if (turn_no < 0 || static_cast<size_t>(turn_no) != history.size()) {
    throw std::invalid_argument("turn_no " + std::to_string(turn_no) +
                                " does not match history length " +
                                std::to_string(history.size()));
  }
  AgentPromptParts parts;
  parts.viewer = viewer;
  parts.mode = mode;
  parts.names = {task.participants[0].name, task.participants[1].name};
  parts.context = render_context(task, viewer, policy);
  parts.goal = task.goals[viewer];
  parts.partner_goal = policy.show_partner_goal ? task.goals[1 - viewer] : "Unknown";
  parts.history = render_history(history, task);
  parts.turn_no = turn_no;
  parts.style_addendum = std::string(style_addendum);
  return parts;
}

std::string assemble_agent_prompt(const AgentPromptParts& parts) {
  const std::string& me = parts.names.at(parts.viewer);
  std::ostringstream out;
  out << "Imagine you are " << me << ", your task is to act/speak as " << me << " would, \n"
      << "keeping in mind " << me << "'s social goal.\n"
      << "You can find " << me
      << "'s goal (or background) in the 'Here is the context of the interaction' field.\n"
      << "Note that " << me << "'s goal is only visible to you.\n"
      << "You should try your best to achieve " << me
      << "'s goal in a way that "
      << (parts.mode == SimulationMode::kMindreaders ? "align" : "aligns")
      << " with their character traits.\n"
      << "Additionally, maintaining the conversation's naturalness and realism is essential\n"
      << "(e.g., do not repeat what other people has already said before).\n";
  if (!parts.style_addendum.empty()) out << parts.style_addendum << "\n";
  out << "\n"
      << "Here is the context of this interaction:\n"
      << parts.context;
  for (int i = 0; i < 2; ++i) {
    out << parts.names[i] << "'s goal: " << (i == parts.viewer ? parts.goal : parts.partner_goal)
        << "\n";
  }
  out << "Conversation Starts:\n"
      << parts.history << ".\n"
      << "You are at Turn #" << parts.turn_no << ". " << kActionBanner << kFormatBlock;
  return out.str();
}

PromptText build_agent_prompt(const SocialTask& task, int viewer, SimulationMode mode,
                              const std::vector<Turn>& history, int turn_no,
                              const VisibilityPolicy& policy, std::string_view style_addendum) {
  return PromptText::user(assemble_agent_prompt(
      agent_prompt_parts(task, viewer, mode, history, turn_no, policy, style_addendum)));
}

PromptText build_script_prompt(const SocialTask& task, int max_turns) {
  std::ostringstream out;
  out << "Please write the script between two characters based on their social goals with a "
         "maximum of "
      << max_turns << " turns.\n"
      << "Here is the context of this interaction:\n"
      << render_context(task, 0, VisibilityPolicy::omniscient());
  for (int i = 0; i < 2; ++i) {
    out << task.participants[i].name << "'s goal: " << task.goals[i] << "\n";
  }
  out << "\n" << kScriptRules;
  return PromptText::user(out.str());
}

}  // namespace asymsim
