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

// Converts script-mode episodes into per-turn supervised records whose
// prompt side is exactly what the interactive engine would show the acting
// agent, and writes them as chat-format JSON lines.

#ifndef ASYMSIM_FINETUNE_HPP_
#define ASYMSIM_FINETUNE_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymsim/domain.hpp"
#include "asymsim/prompt.hpp"

namespace asymsim {

struct FinetuneRecord {
  std::string episode_id;
  int turn_index = 0;
  int speaker = 0;
  std::array<std::string, 2> names;
  std::string instruction;  // i
  std::string context;      // c
  std::string goal;         // g
  std::string partner_goal;
  std::string history;      // h: turns before turn_index
  std::string response;     // r: action JSON

  bool operator==(const FinetuneRecord&) const = default;
};

// The user message for a record, rendered by the live prompt assembler.
std::string record_user_content(const FinetuneRecord& record);

enum class SpeakerFilter { kBoth, kFirst, kSecond };

// Requires a complete script-mode episode (std::invalid_argument otherwise).
std::vector<FinetuneRecord> episode_to_records(const Episode& episode, const SocialTask& task,
                                               SpeakerFilter speakers = SpeakerFilter::kBoth);

struct DroppedEpisode {
  std::string episode_id;
  std::string reason;  // "incomplete" or "no rewards"
};

struct FilterResult {
  std::vector<Episode> kept;
  std::vector<DroppedEpisode> dropped;
};

FilterResult filter_episodes(const std::vector<Episode>& episodes,
                             const std::map<std::string, EvaluationScores>& evaluations);

inline constexpr int kFinetuneFormatVersion = 1;

struct ExportManifest {
  std::vector<std::string> source_episode_ids;
  size_t kept = 0;
  std::vector<DroppedEpisode> dropped;
  size_t record_count = 0;
  std::string output_path;
  int format_version = kFinetuneFormatVersion;
  std::string speakers = "both";
  json recommended = json{{"epochs", 1}};
};

json to_json_value(const ExportManifest& manifest);

std::string record_to_chat_line(const FinetuneRecord& record);

// Sorts by (episode id, turn index) and writes one chat object per line.
ExportManifest write_chat_jsonl(std::vector<FinetuneRecord> records, const std::string& path);

// filter_episodes + episode_to_records + write_chat_jsonl; the manifest is
// also written next to `path` as <path>.manifest.json.
ExportManifest export_finetune(const std::vector<Episode>& episodes,
                               const std::map<std::string, EvaluationScores>& evaluations,
                               const std::string& path,
                               SpeakerFilter speakers = SpeakerFilter::kBoth);

}  // namespace asymsim

#endif  // ASYMSIM_FINETUNE_HPP_
