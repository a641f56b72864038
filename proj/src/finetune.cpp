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

#include "asymsim/finetune.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "asymsim/engine.hpp"

namespace asymsim {

std::string record_user_content(const FinetuneRecord& record) {
  AgentPromptParts parts;
  parts.viewer = record.speaker;
  parts.names = record.names;
  parts.context = record.context;
  parts.goal = record.goal;
  parts.partner_goal = record.partner_goal;
  parts.history = record.history;
  parts.turn_no = record.turn_index;
  return assemble_agent_prompt(parts);
}

std::vector<FinetuneRecord> episode_to_records(const Episode& episode, const SocialTask& task,
                                               SpeakerFilter speakers) {
  if (episode.mode != SimulationMode::kScript) {
    throw std::invalid_argument("finetune records come from script-mode episodes");
  }
  if (!episode.complete) throw std::invalid_argument("episode " + episode.id + " is incomplete");
  const VisibilityPolicy policy = VisibilityPolicy::agents_default();
  std::vector<FinetuneRecord> out;
  std::vector<Turn> history;
  history.reserve(episode.turns.size());
  for (size_t k = 0; k < episode.turns.size(); ++k) {
    const Turn& turn = episode.turns[k];
    bool wanted = speakers == SpeakerFilter::kBoth ||
                  (speakers == SpeakerFilter::kFirst && turn.speaker == 0) ||
                  (speakers == SpeakerFilter::kSecond && turn.speaker == 1);
    if (wanted) {
      AgentPromptParts parts = agent_prompt_parts(task, turn.speaker, SimulationMode::kAgents,
                                                  history, static_cast<int>(k), policy);
      FinetuneRecord record;
      record.episode_id = episode.id;
      record.turn_index = static_cast<int>(k);
      record.speaker = turn.speaker;
      record.names = parts.names;
      record.instruction = agent_instruction(parts.names[turn.speaker]);
      record.context = std::move(parts.context);
      record.goal = std::move(parts.goal);
      record.partner_goal = std::move(parts.partner_goal);
      record.history = std::move(parts.history);
      record.response = serialize_action({turn.action, turn.argument});
      out.push_back(std::move(record));
    }
    history.push_back(turn);
  }
  return out;
}

FilterResult filter_episodes(const std::vector<Episode>& episodes,
                             const std::map<std::string, EvaluationScores>& evaluations) {
  FilterResult out;
  for (const auto& e : episodes) {
    if (!e.complete) {
      out.dropped.push_back({e.id, "incomplete"});
    } else if (!evaluations.count(e.id)) {
      out.dropped.push_back({e.id, "no rewards"});
    } else {
      out.kept.push_back(e);
    }
  }
  return out;
}

json to_json_value(const ExportManifest& m) {
  json dropped = json::array();
  std::map<std::string, size_t> by_reason;
  for (const auto& d : m.dropped) {
    dropped.push_back({{"episode_id", d.episode_id}, {"reason", d.reason}});
    by_reason[d.reason]++;
  }
  return json{{"format_version", m.format_version},
              {"output_path", m.output_path},
              {"source_episode_ids", m.source_episode_ids},
              {"kept", m.kept},
              {"dropped_count", m.dropped.size()},
              {"dropped_by_reason", by_reason},
              {"dropped", dropped},
              {"record_count", m.record_count},
              {"speakers", m.speakers},
              {"recommended", m.recommended}};
}

std::string record_to_chat_line(const FinetuneRecord& record) {
  json line{{"messages",
             json::array({{{"role", "user"}, {"content", record_user_content(record)}},
                          {{"role", "assistant"}, {"content", record.response}}})}};
  return line.dump();
}

ExportManifest write_chat_jsonl(std::vector<FinetuneRecord> records, const std::string& path) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.episode_id != b.episode_id) return a.episode_id < b.episode_id;
    return a.turn_index < b.turn_index;
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  ExportManifest manifest;
  manifest.output_path = path;
  for (const auto& record : records) {
    out << record_to_chat_line(record) << '\n';
    if (manifest.source_episode_ids.empty() ||
        manifest.source_episode_ids.back() != record.episode_id) {
      manifest.source_episode_ids.push_back(record.episode_id);
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
  manifest.record_count = records.size();
  manifest.kept = manifest.source_episode_ids.size();
  return manifest;
}

ExportManifest export_finetune(const std::vector<Episode>& episodes,
                               const std::map<std::string, EvaluationScores>& evaluations,
                               const std::string& path, SpeakerFilter speakers) {
  FilterResult filtered = filter_episodes(episodes, evaluations);
  std::vector<FinetuneRecord> records;
  for (const auto& e : filtered.kept) {
    auto more = episode_to_records(e, e.task, speakers);
    records.insert(records.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
  }
  ExportManifest manifest = write_chat_jsonl(std::move(records), path);
  manifest.source_episode_ids.clear();
  for (const auto& e : filtered.kept) manifest.source_episode_ids.push_back(e.id);
  std::sort(manifest.source_episode_ids.begin(), manifest.source_episode_ids.end());
  manifest.kept = filtered.kept.size();
  manifest.dropped = std::move(filtered.dropped);
  manifest.speakers = speakers == SpeakerFilter::kBoth    ? "both"
                      : speakers == SpeakerFilter::kFirst ? "first"
                                                          : "second";
  write_file(path + ".manifest.json", to_json_value(manifest).dump(2) + "\n");
  return manifest;
}

}  // namespace asymsim
