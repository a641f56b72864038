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

#include "asymsim/engine.hpp"

#include "asymsim/json_extract.hpp"

namespace asymsim {

void EngineConfig::validate() const {
  if (max_turns < 1) throw std::invalid_argument("max_turns must be >= 1");
  if (malformed_retries < 0) throw std::invalid_argument("malformed_retries must be >= 0");
  if (start_speaker != 0 && start_speaker != 1) {
    throw std::invalid_argument("start_speaker must be 0 or 1");
  }
  if (max_output_tokens < 1) throw std::invalid_argument("max_output_tokens must be >= 1");
}

void to_json(json& j, const EngineConfig& c) {
  j = json{{"max_turns", c.max_turns},
           {"start_speaker", c.start_speaker},
           {"malformed_retries", c.malformed_retries},
           {"temperature", c.temperature},
           {"max_output_tokens", c.max_output_tokens},
           {"log_prompts", c.log_prompts},
           {"style_addendum", c.style_addendum}};
}

void from_json(const json& j, EngineConfig& c) {
  EngineConfig d;
  c.max_turns = j.value("max_turns", d.max_turns);
  c.start_speaker = j.value("start_speaker", d.start_speaker);
  c.malformed_retries = j.value("malformed_retries", d.malformed_retries);
  c.temperature = j.value("temperature", d.temperature);
  c.max_output_tokens = j.value("max_output_tokens", d.max_output_tokens);
  c.log_prompts = j.value("log_prompts", d.log_prompts);
  c.style_addendum = j.value("style_addendum", d.style_addendum);
}

ActionEnvelope parse_action(std::string_view raw) {
  // Scan objects in order; the first one carrying action_type decides.
  for (size_t pos = raw.find('{'); pos != std::string_view::npos; pos = raw.find('{', pos + 1)) {
    auto candidate = extract_first_json_object(raw.substr(pos));
    if (!candidate) break;
    const json& obj = *candidate;
    if (!obj.is_object() || !obj.contains("action_type")) continue;
    const json& type = obj["action_type"];
    if (!type.is_string()) throw MalformedAction("action_type is not a string");
    auto action = try_action_from_wire(type.get<std::string>());
    if (!action) throw MalformedAction("action_type not in enum: " + type.get<std::string>());
    auto arg = obj.find("argument");
    if (arg == obj.end()) throw MalformedAction("missing required key: argument");
    if (!arg->is_string()) throw MalformedAction("argument is not a string");
    ActionEnvelope out{*action, arg->get<std::string>()};
    if (!action_takes_argument(out.action_type)) {
      out.argument.clear();
    } else if (out.argument.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw MalformedAction("empty argument for " + type.get<std::string>());
    }
    return out;
  }
  throw MalformedAction("no JSON object with action_type found");
}

std::string serialize_action(const ActionEnvelope& action) {
  return "{\"action_type\": " + json(std::string(to_wire(action.action_type))).dump() +
         ", \"argument\": " + json(action.argument).dump() + "}";
}

int next_speaker(const std::vector<Turn>& history, int start_speaker) {
  if (history.empty()) return start_speaker;
  return 1 - history.back().speaker;
}

Clock& default_clock() {
  static SystemClock clock;
  return clock;
}

Episode run_interactive_episode(const SocialTask& task, SimulationMode mode,
                                const std::array<Backend*, 2>& backends,
                                const VisibilityPolicy& policy, const EngineConfig& config,
                                const EpisodeContext& context) {
  if (mode == SimulationMode::kScript) {
    throw std::invalid_argument("run_interactive_episode does not run script mode");
  }
  if (!backends[0] || !backends[1]) throw std::invalid_argument("both backends are required");
  config.validate();
  Clock& clock = context.clock ? *context.clock : default_clock();

  Episode episode;
  episode.id = context.episode_id;
  episode.task = task;
  episode.mode = mode;
  episode.provenance.models = {backends[0]->model(), backends[1]->model()};
  episode.provenance.temperature = config.temperature;
  episode.provenance.started_at = format_timestamp(clock.now_ms());

  auto abort = [&](int turn_no, const std::string& cause) {
    episode.complete = false;
    episode.provenance.abort_reason = cause;
    episode.provenance.finished_at = format_timestamp(clock.now_ms());
    throw EpisodeAborted(turn_no, cause, episode);
  };

  while (static_cast<int>(episode.turns.size()) < config.max_turns) {
    const int turn_no = static_cast<int>(episode.turns.size());
    const int speaker = next_speaker(episode.turns, config.start_speaker);
    GenerationRequest request;
    request.prompt = build_agent_prompt(task, speaker, mode, episode.turns, turn_no, policy,
                                        config.style_addendum);
    request.temperature = config.temperature;
    request.max_output_tokens = config.max_output_tokens;
    const std::string hash = prompt_hash(request.prompt);

    std::optional<ActionEnvelope> action;
    std::string last_error;
    for (int attempt = 1; attempt <= config.malformed_retries + 1 && !action; ++attempt) {
      CallRecord call;
      call.turn = turn_no;
      call.speaker = speaker;
      call.attempt = attempt;
      call.model = backends[speaker]->model();
      call.prompt_hash = hash;
      if (config.log_prompts) call.prompt = request.prompt.text();
      try {
        Completion completion = backends[speaker]->complete(request);
        call.response = completion.text;
        call.latency_ms = completion.latency_ms;
        try {
          action = parse_action(completion.text);
        } catch (const MalformedAction& e) {
          call.error = std::string("malformed action: ") + e.what();
          last_error = call.error;
        }
      } catch (const BackendError& e) {
        call.error = std::string("backend: ") + e.what();
        episode.provenance.calls.push_back(call);
        if (context.observer) context.observer->on_call(episode, call);
        abort(turn_no, call.error);
      }
      episode.provenance.calls.push_back(call);
      if (context.observer) context.observer->on_call(episode, call);
    }
    if (!action) abort(turn_no, last_error);

    Turn turn{turn_no, speaker, action->action_type, action->argument};
    episode.turns.push_back(turn);
    if (context.observer) context.observer->on_turn(episode, turn);
    if (turn.action == ActionType::kLeave) break;
  }
  episode.complete = true;
  episode.provenance.finished_at = format_timestamp(clock.now_ms());
  return episode;
}

}  // namespace asymsim
