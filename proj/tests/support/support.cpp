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

#include "support/support.hpp"

#include <atomic>

namespace asymsim::testing {

namespace fs = std::filesystem;

std::string data_path(const std::string& rel) {
  return (fs::path(ASYMSIM_TEST_DATA_DIR) / rel).string();
}

std::string golden(const std::string& name) {
  return read_file((fs::path(ASYMSIM_TEST_GOLDEN_DIR) / name).string());
}

std::vector<SocialTask> bundled_tasks() { return load_tasks(data_path("tasks.json")); }

const SocialTask& donovan_benjamin() {
  static const SocialTask task = bundled_tasks().at(0);
  return task;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("asymsim-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string TempDir::str(const std::string& rel) const {
  return rel.empty() ? path_.string() : (path_ / rel).string();
}

Turn make_turn(int index, int speaker, ActionType action, std::string argument) {
  return Turn{index, speaker, action, std::move(argument)};
}

Episode make_episode(const SocialTask& task, SimulationMode mode, std::vector<Turn> turns,
                     std::string id, bool complete) {
  Episode e;
  e.id = std::move(id);
  e.task = task;
  e.mode = mode;
  e.turns = std::move(turns);
  e.complete = complete;
  return e;
}

std::string action_json(ActionType action, const std::string& argument) {
  return json{{"action_type", std::string(to_wire(action))}, {"argument", argument}}.dump();
}

Episode episode_with_token_counts(const SocialTask& task, const std::vector<int>& tokens,
                                  std::string id) {
  std::vector<Turn> turns;
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string text;
    for (int w = 0; w < tokens[i]; ++w) text += (w ? " w" : "w") + std::to_string(w);
    turns.push_back(make_turn(static_cast<int>(i), static_cast<int>(i % 2), ActionType::kSpeak,
                              text));
  }
  return make_episode(task, SimulationMode::kAgents, std::move(turns), std::move(id));
}

Episode mention_episode(const SocialTask& task, int turns, std::optional<int> mention_at,
                        const std::string& target, std::string id) {
  std::vector<Turn> out;
  for (int i = 0; i < turns; ++i) {
    std::string text = mention_at && *mention_at == i ? "Do you know " + target + "?"
                                                      : "Nice weather tonight.";
    out.push_back(make_turn(i, i % 2, ActionType::kSpeak, text));
  }
  return make_episode(task, SimulationMode::kAgents, std::move(out), std::move(id));
}

std::vector<Episode> verbosity_corpus(const std::vector<std::pair<int, int>>& groups) {
  std::vector<Episode> out;
  for (const auto& [count, tokens] : groups) {
    for (int i = 0; i < count; ++i) {
      out.push_back(episode_with_token_counts(donovan_benjamin(), {tokens, tokens, tokens},
                                              "v" + std::to_string(out.size())));
    }
  }
  return out;
}

std::vector<Episode> first_mention_corpus(const SocialTask& task, const std::vector<int>& positions,
                                          int turns, int absent) {
  const std::string target = mutual_friends(effective_friend_lists(task)[0],
                                            effective_friend_lists(task)[1])
                                 .at(0);
  std::vector<Episode> out;
  for (int k : positions) {
    out.push_back(mention_episode(task, turns, k, target, "m" + std::to_string(out.size())));
  }
  for (int i = 0; i < absent; ++i) {
    out.push_back(mention_episode(task, turns, std::nullopt, target,
                                  "m" + std::to_string(out.size())));
  }
  return out;
}

Episode random_episode(std::mt19937_64& rng, const SocialTask& task, std::string id,
                       int length) {
  static const std::vector<std::string> kWords{
      "hello", "I'm",  "not", "sure", "about", "that,",   "friend", "$450", "really?",
      "we",    "met",  "at",  "the",  "party", "(maybe)", "42",     "ok!",  "well...",
      "café",  "yes;", "no",  "it's", "fine",  "\"quoted\"", "[aside]", "Jacob", ":"};
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_int_distribution<int> words(1, 12);
  std::uniform_int_distribution<size_t> pick(0, kWords.size() - 1);
  std::uniform_int_distribution<int> kind(0, 9);
  auto sentence = [&] {
    std::string s;
    int n = words(rng);
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + kWords[pick(rng)];
    return s;
  };
  const int n = length > 0 ? length : len(rng);
  const int start = static_cast<int>(rng() & 1);
  std::vector<Turn> turns;
  for (int i = 0; i < n; ++i) {
    const int speaker = (start + i) % 2;
    ActionType action;
    if (i == n - 1 && kind(rng) < 3) {
      action = ActionType::kLeave;
    } else {
      int k = kind(rng);
      action = k < 6 ? ActionType::kSpeak
                     : k < 7 ? ActionType::kNonVerbal : k < 9 ? ActionType::kAction
                                                              : ActionType::kNone;
    }
    turns.push_back(make_turn(i, speaker, action,
                              action_takes_argument(action) ? sentence() : std::string()));
  }
  return make_episode(task, SimulationMode::kScript, std::move(turns), std::move(id));
}

const std::vector<DealCase>& deal_cases() {
  static const std::vector<DealCase> kCases{
      {"<Reasoning>They agreed on $400.</Reasoning>, <Answer>yes</Answer>", true},
      {"<Reasoning>No price was settled.</Reasoning>, <Answer>no</Answer>", false},
      {"<reasoning>ok</reasoning> <answer>Yes</answer>", true},
      {"<REASONING>x</REASONING>\n<ANSWER>NO</ANSWER>", false},
      {"<Reasoning>x</Reasoning>, <Answer>(yes)</Answer>", true},
      {"<Reasoning>x</Reasoning>, <Answer> no. </Answer>", false},
      {"<Answer>yes</Answer>", true},
      {"Sure.\n<Reasoning>\nmulti\nline\n</Reasoning>\n<Answer>\nYES\n</Answer>\n", true},
      {"<Reasoning>x</Reasoning>, <Answer>\"no\"</Answer>", false},
      {"<Reasoning>x</Reasoning>, <Answer>[Yes]!</Answer>", true},
      {"<Reasoning>x</Reasoning>", std::nullopt},
      {"yes", std::nullopt},
      {"", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer>maybe</Answer>", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer></Answer>", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer>yes", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer>yes and no</Answer>", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer>(choose yes or no)</Answer>", std::nullopt},
      {"<Reasoning>x</Reasoning>, <Answer>y</Answer>", std::nullopt},
      {"<Reasoning>x</Reasoning>, Answer: yes", std::nullopt},
  };
  return kCases;
}

EvaluationScores uniform_scores(double goal) {
  EvaluationScores s;
  for (auto& agent : s.agents) {
    for (const auto& info : all_dimensions()) {
      agent.values[info.dimension] = info.dimension == Dimension::kGoal ? goal : info.max;
      agent.rationales[info.dimension] = "fine";
    }
  }
  return s;
}

std::string rubric_reply(const EvaluationScores& scores) {
  json doc;
  for (int a = 0; a < 2; ++a) {
    json agent;
    for (const auto& [dim, value] : scores.agents[a].values) {
      auto it = scores.agents[a].rationales.find(dim);
      agent[std::string(dimension_info(dim).code)] = {
          {"reasoning", it == scores.agents[a].rationales.end() ? "" : it->second},
          {"score", value}};
    }
    doc["agent_" + std::to_string(a + 1)] = agent;
  }
  return "Here is my evaluation.\n```json\n" + doc.dump(2) + "\n```\n";
}

HttpResponse StubTransport::post_json(
    const std::string& url, const std::vector<std::pair<std::string, std::string>>& headers,
    const std::string& body, int64_t timeout_ms) {
  std::lock_guard<std::mutex> lock(mu_);
  requests_.push_back({url, headers, body, timeout_ms});
  if (responses_.empty()) return HttpResponse{0, "", "stub exhausted", false};
  HttpResponse r = responses_.front();
  responses_.pop_front();
  return r;
}

std::vector<StubTransport::Request> StubTransport::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

HttpResponse StubTransport::ok(const std::string& content) {
  json body{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
            {"usage", {{"prompt_tokens", 10}, {"completion_tokens", 5}}}};
  return HttpResponse{200, body.dump(), "", false};
}

}  // namespace asymsim::testing
