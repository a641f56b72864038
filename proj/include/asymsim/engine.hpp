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

#ifndef ASYMSIM_ENGINE_HPP_
#define ASYMSIM_ENGINE_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymsim/backend.hpp"
#include "asymsim/domain.hpp"
#include "asymsim/prompt.hpp"

namespace asymsim {

struct EngineConfig {
  int max_turns = 20;
  int start_speaker = 0;
  int malformed_retries = 3;
  double temperature = 0.7;
  int max_output_tokens = 512;
  bool log_prompts = true;
  std::string style_addendum;

  void validate() const;
  bool operator==(const EngineConfig&) const = default;
};

void to_json(json& j, const EngineConfig& c);
void from_json(const json& j, EngineConfig& c);

struct ActionEnvelope {
  ActionType action_type = ActionType::kNone;
  std::string argument;

  bool operator==(const ActionEnvelope&) const = default;
};

class MalformedAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Takes the first JSON object in `raw` that carries both required keys.
ActionEnvelope parse_action(std::string_view raw);

// `{"action_type": "speak", "argument": "hi"}`
std::string serialize_action(const ActionEnvelope& action);

int next_speaker(const std::vector<Turn>& history, int start_speaker);

class EpisodeObserver {
 public:
  virtual ~EpisodeObserver() = default;
  virtual void on_call(const Episode& /*episode*/, const CallRecord& /*call*/) {}
  virtual void on_turn(const Episode& /*episode*/, const Turn& /*turn*/) {}
};

class EpisodeAborted : public std::runtime_error {
 public:
  EpisodeAborted(int turn, std::string cause, Episode partial)
      : std::runtime_error("episode aborted at turn " + std::to_string(turn) + ": " + cause),
        turn_(turn),
        cause_(std::move(cause)),
        partial_(std::move(partial)) {}
  int turn() const { return turn_; }
  const std::string& cause() const { return cause_; }
  const Episode& partial() const { return partial_; }

 private:
  int turn_;
  std::string cause_;
  Episode partial_;
};

struct EpisodeContext {
  std::string episode_id;
  Clock* clock = nullptr;  // system clock when null
  EpisodeObserver* observer = nullptr;
};

Clock& default_clock();

// Strict alternation from config.start_speaker until a Leave or max_turns.
Episode run_interactive_episode(const SocialTask& task, SimulationMode mode,
                                const std::array<Backend*, 2>& backends,
                                const VisibilityPolicy& policy, const EngineConfig& config,
                                const EpisodeContext& context = {});

}  // namespace asymsim

#endif  // ASYMSIM_ENGINE_HPP_
