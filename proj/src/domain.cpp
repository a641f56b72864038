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

#include "asymsim/domain.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace asymsim {

namespace {

constexpr std::array<std::string_view, 5> kActionWire = {
    "none", "speak", "non-verbal communication", "action", "leave"};

constexpr std::array<ActionType, 5> kActionOrder = {
    ActionType::kNone, ActionType::kSpeak, ActionType::kNonVerbal,
    ActionType::kAction, ActionType::kLeave};

std::string optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::string>();
}

}  // namespace

std::string_view to_wire(ActionType type) {
  for (size_t i = 0; i < kActionOrder.size(); ++i) {
    if (kActionOrder[i] == type) return kActionWire[i];
  }
  return "none";
}

std::optional<ActionType> try_action_from_wire(std::string_view wire) {
  for (size_t i = 0; i < kActionWire.size(); ++i) {
    if (kActionWire[i] == wire) return kActionOrder[i];
  }
  return std::nullopt;
}

ActionType action_from_wire(std::string_view wire) {
  auto type = try_action_from_wire(wire);
  if (!type) throw std::invalid_argument("unknown action type: " + std::string(wire));
  return *type;
}

bool action_takes_argument(ActionType type) {
  return type == ActionType::kSpeak || type == ActionType::kNonVerbal ||
         type == ActionType::kAction;
}

std::string_view to_string(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::kAgents: return "agents";
    case SimulationMode::kMindreaders: return "mindreaders";
    case SimulationMode::kScript: return "script";
  }
  return "agents";
}

SimulationMode mode_from_string(std::string_view text) {
  if (text == "agents") return SimulationMode::kAgents;
  if (text == "mindreaders") return SimulationMode::kMindreaders;
  if (text == "script") return SimulationMode::kScript;
  throw std::invalid_argument("unknown simulation mode: " + std::string(text));
}

const std::array<DimensionInfo, 7>& all_dimensions() {
  static const std::array<DimensionInfo, 7> kDims = {{
      {Dimension::kBel, "BEL", "believability", 0, 10},
      {Dimension::kRel, "REL", "relationship", -5, 5},
      {Dimension::kKno, "KNO", "knowledge", 0, 10},
      {Dimension::kSec, "SEC", "secret", -10, 0},
      {Dimension::kSoc, "SOC", "social_rules", -10, 0},
      {Dimension::kFin, "FIN", "financial_and_material_benefits", -5, 5},
      {Dimension::kGoal, "GOAL", "goal", 0, 10},
  }};
  return kDims;
}

const DimensionInfo& dimension_info(Dimension dimension) {
  for (const auto& info : all_dimensions()) {
    if (info.dimension == dimension) return info;
  }
  throw std::invalid_argument("unknown dimension");
}

std::optional<Dimension> dimension_from_code(std::string_view code) {
  for (const auto& info : all_dimensions()) {
    if (info.code == code) return info.dimension;
  }
  return std::nullopt;
}

std::vector<std::string> score_range_violations(const EvaluationScores& scores) {
  std::vector<std::string> out;
  for (size_t agent = 0; agent < scores.agents.size(); ++agent) {
    for (const auto& [dim, value] : scores.agents[agent].values) {
      const auto& info = dimension_info(dim);
      if (!(value >= info.min && value <= info.max)) {
        std::ostringstream msg;
        msg << "agent " << (agent + 1) << " " << info.code << "=" << value
            << " outside [" << info.min << ", " << info.max << "]";
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

void check_score_ranges(const EvaluationScores& scores) {
  auto violations = score_range_violations(scores);
  if (!violations.empty()) throw ScoreRangeError(violations.front());
}

std::vector<std::string> validate_task(const SocialTask& task) {
  std::vector<std::string> violations;
  for (size_t i = 0; i < task.participants.size(); ++i) {
    if (task.participants[i].name.empty()) {
      violations.push_back("participants[" + std::to_string(i) + "].name empty");
    }
  }
  if (!task.participants[0].name.empty() &&
      task.participants[0].name == task.participants[1].name) {
    violations.push_back("participants.name duplicate");
  }
  for (size_t i = 0; i < task.friend_lists.size(); ++i) {
    if (!task.friend_lists[i]) continue;
    for (const auto& entry : *task.friend_lists[i]) {
      if (entry.name.empty()) {
        violations.push_back("friend_lists[" + std::to_string(i) + "].name empty");
        break;
      }
    }
  }
  if (task.has_tag("mutualfriends")) {
    if (!task.friend_lists[0] || !task.friend_lists[1]) {
      violations.push_back("friend_lists missing");
    } else if (mutual_friends(*task.friend_lists[0], *task.friend_lists[1]).empty()) {
      violations.push_back("friend_lists intersection empty");
    }
  }
  return violations;
}

std::vector<FriendEntry> parse_friend_list(std::string_view goal_text) {
  // A lone trailing period after whitespace is dropped; "Inc." keeps its dot.
  static const std::regex kLine(
      R"(^\s*([^:]*[^:\s])\s*:\s*Hobby:\s*(.*?)\s+Company:\s*(.*?)(?:\s+\.)?\s*$)");
  std::vector<FriendEntry> out;
  std::string text(goal_text);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) continue;
    FriendEntry entry{m[1].str(), m[2].str(), m[3].str()};
    if (entry.name.empty() || entry.company.empty()) continue;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<std::string> mutual_friends(const std::vector<FriendEntry>& a,
                                        const std::vector<FriendEntry>& b) {
  std::set<std::string> left;
  for (const auto& f : a) left.insert(f.name);
  std::set<std::string> common;
  for (const auto& f : b) {
    if (left.count(f.name)) common.insert(f.name);
  }
  return {common.begin(), common.end()};
}

std::array<std::vector<FriendEntry>, 2> effective_friend_lists(const SocialTask& task) {
  std::array<std::vector<FriendEntry>, 2> lists;
  for (size_t i = 0; i < 2; ++i) {
    lists[i] = task.friend_lists[i] ? *task.friend_lists[i] : parse_friend_list(task.goals[i]);
  }
  return lists;
}

// --- JSON ------------------------------------------------------------------

void to_json(json& j, const CharacterProfile& p) {
  j = json{{"name", p.name}};
  if (p.age) j["age"] = *p.age;
  j["gender"] = p.gender;
  j["gender_pronouns"] = p.gender_pronouns;
  j["occupation"] = p.occupation;
  j["personality_and_values"] = p.personality_and_values;
  j["public_info"] = p.public_info;
  j["secret"] = p.secret;
}

void from_json(const json& j, CharacterProfile& p) {
  p.name = j.at("name").get<std::string>();
  p.age.reset();
  if (auto it = j.find("age"); it != j.end() && !it->is_null()) p.age = it->get<int>();
  p.gender = optional_string(j, "gender");
  p.gender_pronouns = optional_string(j, "gender_pronouns");
  p.occupation = optional_string(j, "occupation");
  p.personality_and_values = optional_string(j, "personality_and_values");
  p.public_info = optional_string(j, "public_info");
  p.secret = optional_string(j, "secret");
}

void to_json(json& j, const FriendEntry& f) {
  j = json{{"name", f.name}, {"hobby", f.hobby}, {"company", f.company}};
}

void from_json(const json& j, FriendEntry& f) {
  f.name = j.at("name").get<std::string>();
  f.hobby = optional_string(j, "hobby");
  f.company = optional_string(j, "company");
}

void to_json(json& j, const SocialTask& t) {
  j = json{{"id", t.id},
           {"scenario", t.scenario},
           {"participants", t.participants},
           {"relationship", t.relationship},
           {"goals", t.goals},
           {"tags", json(std::vector<std::string>(t.tags.begin(), t.tags.end()))}};
  if (t.friend_lists[0] || t.friend_lists[1]) {
    json lists = json::array();
    for (const auto& l : t.friend_lists) lists.push_back(l ? json(*l) : json(nullptr));
    j["friend_lists"] = lists;
  }
}

void from_json(const json& j, SocialTask& t) {
  t.id = optional_string(j, "id");
  t.scenario = j.at("scenario").get<std::string>();
  const auto& participants = j.at("participants");
  const auto& goals = j.at("goals");
  if (!participants.is_array() || participants.size() != 2) {
    throw std::invalid_argument("task needs exactly 2 participants");
  }
  if (!goals.is_array() || goals.size() != 2) {
    throw std::invalid_argument("task needs exactly 2 goals");
  }
  for (size_t i = 0; i < 2; ++i) {
    t.participants[i] = participants[i].get<CharacterProfile>();
    t.goals[i] = goals[i].get<std::string>();
  }
  t.relationship = optional_string(j, "relationship");
  t.tags.clear();
  if (auto it = j.find("tags"); it != j.end()) {
    for (const auto& tag : *it) t.tags.insert(tag.get<std::string>());
  }
  t.friend_lists = {};
  if (auto it = j.find("friend_lists"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2) {
      throw std::invalid_argument("friend_lists needs one entry per participant");
    }
    for (size_t i = 0; i < 2; ++i) {
      if (!(*it)[i].is_null()) t.friend_lists[i] = (*it)[i].get<std::vector<FriendEntry>>();
    }
  }
}

void to_json(json& j, const Turn& t) {
  j = json{{"index", t.index},
           {"speaker", t.speaker},
           {"action", std::string(to_wire(t.action))},
           {"argument", t.argument}};
}

void from_json(const json& j, Turn& t) {
  t.index = j.at("index").get<int>();
  t.speaker = j.at("speaker").get<int>();
  t.action = action_from_wire(j.at("action").get<std::string>());
  t.argument = j.at("argument").get<std::string>();
  if (t.speaker != 0 && t.speaker != 1) throw std::invalid_argument("turn speaker must be 0 or 1");
}

void to_json(json& j, const CallRecord& c) {
  j = json{{"turn", c.turn},
           {"speaker", c.speaker},
           {"attempt", c.attempt},
           {"model", c.model},
           {"prompt_hash", c.prompt_hash},
           {"prompt", c.prompt},
           {"response", c.response},
           {"error", c.error},
           {"latency_ms", c.latency_ms}};
}

void from_json(const json& j, CallRecord& c) {
  c.turn = j.at("turn").get<int>();
  c.speaker = j.at("speaker").get<int>();
  c.attempt = j.at("attempt").get<int>();
  c.model = optional_string(j, "model");
  c.prompt_hash = optional_string(j, "prompt_hash");
  c.prompt = optional_string(j, "prompt");
  c.response = optional_string(j, "response");
  c.error = optional_string(j, "error");
  c.latency_ms = j.value("latency_ms", 0.0);
}

void to_json(json& j, const Provenance& p) {
  j = json{{"models", p.models},
           {"temperature", p.temperature},
           {"started_at", p.started_at},
           {"finished_at", p.finished_at},
           {"raw_output", p.raw_output},
           {"abort_reason", p.abort_reason},
           {"calls", p.calls}};
}

void from_json(const json& j, Provenance& p) {
  p.models = j.value("models", std::vector<std::string>{});
  p.temperature = j.value("temperature", 0.0);
  p.started_at = optional_string(j, "started_at");
  p.finished_at = optional_string(j, "finished_at");
  p.raw_output = optional_string(j, "raw_output");
  p.abort_reason = optional_string(j, "abort_reason");
  p.calls = j.value("calls", std::vector<CallRecord>{});
}

void to_json(json& j, const Episode& e) {
  j = json{{"id", e.id},
           {"task", e.task},
           {"mode", std::string(to_string(e.mode))},
           {"turns", e.turns},
           {"provenance", e.provenance},
           {"complete", e.complete}};
}

void from_json(const json& j, Episode& e) {
  e.id = j.at("id").get<std::string>();
  e.task = j.at("task").get<SocialTask>();
  e.mode = mode_from_string(j.at("mode").get<std::string>());
  e.turns = j.at("turns").get<std::vector<Turn>>();
  e.provenance = j.contains("provenance") ? j.at("provenance").get<Provenance>() : Provenance{};
  e.complete = j.at("complete").get<bool>();
}

void to_json(json& j, const EvaluationScores& s) {
  json agents = json::array();
  for (const auto& agent : s.agents) {
    json scores = json::object();
    json rationales = json::object();
    for (const auto& [dim, value] : agent.values) {
      scores[std::string(dimension_info(dim).code)] = value;
    }
    for (const auto& [dim, text] : agent.rationales) {
      rationales[std::string(dimension_info(dim).code)] = text;
    }
    agents.push_back(json{{"scores", scores}, {"rationales", rationales}});
  }
  j = json{{"agents", agents}};
}

void from_json(const json& j, EvaluationScores& s) {
  const auto& agents = j.at("agents");
  if (!agents.is_array() || agents.size() != 2) {
    throw std::invalid_argument("scores need exactly 2 agents");
  }
  s = EvaluationScores{};
  for (size_t i = 0; i < 2; ++i) {
    for (const auto& [code, value] : agents[i].at("scores").items()) {
      auto dim = dimension_from_code(code);
      if (!dim) throw std::invalid_argument("unknown score dimension: " + code);
      s.agents[i].values[*dim] = value.get<double>();
    }
    if (auto it = agents[i].find("rationales"); it != agents[i].end()) {
      for (const auto& [code, text] : it->items()) {
        auto dim = dimension_from_code(code);
        if (!dim) throw std::invalid_argument("unknown score dimension: " + code);
        s.agents[i].rationales[*dim] = text.get<std::string>();
      }
    }
  }
  check_score_ranges(s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<SocialTask> load_tasks(const std::string& path) {
  json doc = json::parse(read_file(path));
  std::vector<SocialTask> tasks;
  if (doc.is_array()) {
    for (const auto& item : doc) tasks.push_back(item.get<SocialTask>());
  } else if (doc.is_object() && doc.contains("tasks")) {
    for (const auto& item : doc.at("tasks")) tasks.push_back(item.get<SocialTask>());
  } else {
    tasks.push_back(doc.get<SocialTask>());
  }
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id.empty()) tasks[i].id = "task" + std::to_string(i);
  }
  return tasks;
}

}  // namespace asymsim
