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

#include "asymsim/script.hpp"

#include <algorithm>

#include "asymsim/prompt.hpp"

namespace asymsim {

namespace {

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

bool matches_phrase(std::string_view rest, std::string_view phrase) {
  if (rest == phrase) return true;
  return rest.size() == phrase.size() + 1 && starts_with(rest, phrase) && rest.back() == '.';
}

}  // namespace

std::string normalize_quotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      unsigned char c = static_cast<unsigned char>(text[i + 2]);
      if (c == 0x9C || c == 0x9D) {
        out.push_back('"');
        i += 2;
        continue;
      }
      if (c == 0x98 || c == 0x99) {
        out.push_back('\'');
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

LineResult parse_script_line(std::string_view raw_line, const std::array<std::string, 2>& names) {
  const std::string normalized = normalize_quotes(raw_line);
  const std::string_view line = trim(normalized);

  int speaker = -1;
  size_t matched = 0;
  for (int i = 0; i < 2; ++i) {
    const std::string& name = names[i];
    if (name.empty() || name.size() <= matched || !starts_with(line, name)) continue;
    if (line.size() > name.size() && line[name.size()] != ' ' && line[name.size()] != ':') continue;
    speaker = i;
    matched = name.size();
  }
  if (speaker < 0) return Skip{"unknown speaker"};

  std::string_view rest = trim(line.substr(matched));
  ParsedLine out;
  out.speaker = speaker;

  auto with_argument = [&](ActionType type, std::string_view arg) -> LineResult {
    arg = trim(arg);
    if (arg.empty()) return Skip{"empty argument"};
    out.action = type;
    out.argument = std::string(arg);
    return out;
  };

  if (starts_with(rest, "said:")) {
    std::string_view quoted = trim(rest.substr(5));
    if (quoted.empty() || quoted.front() != '"') return Skip{"unrecognized form"};
    quoted.remove_prefix(1);
    if (!quoted.empty() && quoted.back() == '"') quoted.remove_suffix(1);
    if (quoted.empty()) return Skip{"empty argument"};
    out.action = ActionType::kSpeak;
    out.argument = std::string(quoted);
    return out;
  }
  if (starts_with(rest, "[action]")) return with_argument(ActionType::kAction, rest.substr(8));
  constexpr std::string_view kNonVerbal = "[non-verbal communication]";
  if (starts_with(rest, kNonVerbal)) {
    return with_argument(ActionType::kNonVerbal, rest.substr(kNonVerbal.size()));
  }
  if (matches_phrase(rest, "did nothing")) {
    out.action = ActionType::kNone;
    return out;
  }
  if (matches_phrase(rest, "left the conversation")) {
    out.action = ActionType::kLeave;
    return out;
  }
  return Skip{"unrecognized form"};
}

ScriptParseReport parse_script(std::string_view text, const std::array<std::string, 2>& names,
                               ParseStrictness strictness) {
  ScriptParseReport report;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    if (!report.turns.empty() && report.turns.back().action == ActionType::kLeave) {
      report.truncated_at_leave = true;
      break;
    }
    LineResult result = parse_script_line(line, names);
    if (auto* skip = std::get_if<Skip>(&result)) {
      report.skipped_lines.push_back({line_no, std::string(line), skip->reason});
      continue;
    }
    auto& parsed = std::get<ParsedLine>(result);
    report.turns.push_back(Turn{static_cast<int>(report.turns.size()), parsed.speaker,
                                parsed.action, std::move(parsed.argument)});
  }
  if (strictness == ParseStrictness::kStrict && !report.skipped_lines.empty()) {
    const auto& first = report.skipped_lines.front();
    throw ScriptParseError("line " + std::to_string(first.line_no) + ": " + first.reason,
                           std::move(report));
  }
  return report;
}

Episode run_script_episode(const SocialTask& task, Backend& backend, const EngineConfig& config,
                           const EpisodeContext& context) {
  config.validate();
  Clock& clock = context.clock ? *context.clock : default_clock();

  Episode episode;
  episode.id = context.episode_id;
  episode.task = task;
  episode.mode = SimulationMode::kScript;
  episode.provenance.models = {backend.model()};
  episode.provenance.temperature = config.temperature;
  episode.provenance.started_at = format_timestamp(clock.now_ms());

  GenerationRequest request;
  request.prompt = build_script_prompt(task, config.max_turns);
  request.temperature = config.temperature;
  request.max_output_tokens = kLongOutputTokens;

  CallRecord call;
  call.model = backend.model();
  call.attempt = 1;
  call.prompt_hash = prompt_hash(request.prompt);
  if (config.log_prompts) call.prompt = request.prompt.text();
  auto fail = [&](const std::string& why) {
    episode.provenance.calls.push_back(call);
    if (context.observer) context.observer->on_call(episode, call);
    episode.provenance.abort_reason = why;
    episode.provenance.finished_at = format_timestamp(clock.now_ms());
    episode.complete = false;
  };
  try {
    Completion completion = backend.complete(request);
    call.response = completion.text;
    call.latency_ms = completion.latency_ms;
  } catch (const BackendError& e) {
    call.error = std::string("backend: ") + e.what();
    fail(call.error);
    throw EpisodeAborted(0, call.error, episode);
  }
  episode.provenance.raw_output = call.response;

  const std::array<std::string, 2> names{task.participants[0].name, task.participants[1].name};
  ScriptParseReport report = parse_script(call.response, names);
  if (report.turns.empty()) {
    call.error = "empty script";
    fail(call.error);
    throw EmptyScript("script produced no parseable turns", episode);
  }
  if (report.turns.size() > static_cast<size_t>(config.max_turns)) {
    report.turns.resize(static_cast<size_t>(config.max_turns));
  }
  episode.provenance.calls.push_back(call);
  if (context.observer) context.observer->on_call(episode, call);
  for (auto& turn : report.turns) {
    episode.turns.push_back(turn);
    if (context.observer) context.observer->on_turn(episode, turn);
  }
  episode.complete = true;
  episode.provenance.finished_at = format_timestamp(clock.now_ms());
  return episode;
}

}  // namespace asymsim
