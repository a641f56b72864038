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

// Shared value types for dyadic social tasks, turns and episodes, plus
// their canonical JSON encoding.

#ifndef ASYMSIM_DOMAIN_HPP_
#define ASYMSIM_DOMAIN_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace asymsim {

using json = nlohmann::json;

struct CharacterProfile {
  std::string name;
  std::optional<int> age;
  std::string gender;
  std::string gender_pronouns;
  std::string occupation;
  std::string personality_and_values;
  std::string public_info;
  std::string secret;

  bool operator==(const CharacterProfile&) const = default;
};

struct FriendEntry {
  std::string name;
  std::string hobby;
  std::string company;

  bool operator==(const FriendEntry&) const = default;
};

struct SocialTask {
  std::string id;
  std::string scenario;
  std::array<CharacterProfile, 2> participants;
  std::string relationship;
  std::array<std::string, 2> goals;
  std::set<std::string> tags;
  // Empty optional means the task carries no friend list for that agent.
  std::array<std::optional<std::vector<FriendEntry>>, 2> friend_lists;

  bool has_tag(std::string_view tag) const { return tags.count(std::string(tag)) > 0; }
  bool operator==(const SocialTask&) const = default;
};

enum class ActionType { kNone, kSpeak, kNonVerbal, kAction, kLeave };

std::string_view to_wire(ActionType type);
// Throws std::invalid_argument for anything outside the five wire names.
ActionType action_from_wire(std::string_view wire);
std::optional<ActionType> try_action_from_wire(std::string_view wire);
// Speak, NonVerbal and Action carry a non-empty argument; None and Leave none.
bool action_takes_argument(ActionType type);

struct Turn {
  int index = 0;
  int speaker = 0;
  ActionType action = ActionType::kNone;
  std::string argument;

  bool operator==(const Turn&) const = default;
};

enum class SimulationMode { kAgents, kMindreaders, kScript };

std::string_view to_string(SimulationMode mode);
SimulationMode mode_from_string(std::string_view text);

// One backend call made while producing an episode.
struct CallRecord {
  int turn = 0;
  int speaker = 0;
  int attempt = 0;
  std::string model;
  std::string prompt_hash;
  std::string prompt;  // empty when prompt logging is disabled
  std::string response;
  std::string error;
  double latency_ms = 0.0;

  bool operator==(const CallRecord&) const = default;
};

struct Provenance {
  std::vector<std::string> models;
  double temperature = 0.0;
  std::string started_at;
  std::string finished_at;
  std::string raw_output;
  std::string abort_reason;
  std::vector<CallRecord> calls;

  bool operator==(const Provenance&) const = default;
};

struct Episode {
  std::string id;
  SocialTask task;
  SimulationMode mode = SimulationMode::kAgents;
  std::vector<Turn> turns;
  Provenance provenance;
  bool complete = false;

  bool operator==(const Episode&) const = default;
};

// Judge dimensions with their hard score bounds.
enum class Dimension { kBel, kRel, kKno, kSec, kSoc, kFin, kGoal };

struct DimensionInfo {
  Dimension dimension;
  std::string_view code;
  std::string_view title;
  double min;
  double max;
};

const std::array<DimensionInfo, 7>& all_dimensions();
const DimensionInfo& dimension_info(Dimension dimension);
std::optional<Dimension> dimension_from_code(std::string_view code);

struct AgentScores {
  std::map<Dimension, double> values;
  std::map<Dimension, std::string> rationales;

  bool operator==(const AgentScores&) const = default;
};

struct EvaluationScores {
  std::array<AgentScores, 2> agents;

  bool operator==(const EvaluationScores&) const = default;
};

class ScoreRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns a description per out-of-range score; empty when all are valid.
std::vector<std::string> score_range_violations(const EvaluationScores& scores);
// Throws ScoreRangeError on the first violation.
void check_score_ranges(const EvaluationScores& scores);

std::vector<std::string> validate_task(const SocialTask& task);

// Lines shaped "<Name>: Hobby: <hobby>  Company: <company>", in order.
std::vector<FriendEntry> parse_friend_list(std::string_view goal_text);

std::vector<std::string> mutual_friends(const std::vector<FriendEntry>& a,
                                        const std::vector<FriendEntry>& b);

// Friend lists are read from the task when present, else parsed from goals.
std::array<std::vector<FriendEntry>, 2> effective_friend_lists(const SocialTask& task);

void to_json(json& j, const CharacterProfile& p);
void from_json(const json& j, CharacterProfile& p);
void to_json(json& j, const FriendEntry& f);
void from_json(const json& j, FriendEntry& f);
void to_json(json& j, const SocialTask& t);
void from_json(const json& j, SocialTask& t);
void to_json(json& j, const Turn& t);
void from_json(const json& j, Turn& t);
void to_json(json& j, const CallRecord& c);
void from_json(const json& j, CallRecord& c);
void to_json(json& j, const Provenance& p);
void from_json(const json& j, Provenance& p);
void to_json(json& j, const Episode& e);
void from_json(const json& j, Episode& e);
void to_json(json& j, const EvaluationScores& s);
void from_json(const json& j, EvaluationScores& s);

// Reads a task file holding one task object or an array of tasks.
std::vector<SocialTask> load_tasks(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace asymsim

#endif  // ASYMSIM_DOMAIN_HPP_
