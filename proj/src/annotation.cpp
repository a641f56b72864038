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

#include "asymsim/annotation.hpp"

#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "asymsim/prompt.hpp"

namespace asymsim {

namespace {

std::vector<json> parse_jsonl(const std::string& text) {
  std::vector<json> out;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + " is not a JSON object");
    }
    out.push_back(std::move(doc));
  }
  return out;
}

Side side_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Side::kA;
  if (s == "B" || s == "b") return Side::kB;
  throw std::invalid_argument("winner must be A or B, got " + s);
}

}  // namespace

std::string render_transcript(const Episode& episode) {
  std::string out;
  for (size_t i = 0; i < episode.turns.size(); ++i) {
    if (i) out += '\n';
    const Turn& t = episode.turns[i];
    out += render_turn_line(t, episode.task.participants.at(t.speaker).name);
  }
  return out;
}

BlindedExport make_blinded_pairs(const std::vector<Episode>& left, const std::string& left_label,
                                 const std::vector<Episode>& right,
                                 const std::string& right_label, uint64_t seed,
                                 size_t max_pairs) {
  std::map<std::string, std::vector<const Episode*>> by_task_left, by_task_right;
  for (const auto& e : left) {
    if (e.complete && !e.turns.empty()) by_task_left[e.task.id].push_back(&e);
  }
  for (const auto& e : right) {
    if (e.complete && !e.turns.empty()) by_task_right[e.task.id].push_back(&e);
  }
  std::mt19937_64 rng(seed);
  BlindedExport out;
  for (const auto& [task_id, lefts] : by_task_left) {
    auto it = by_task_right.find(task_id);
    if (it == by_task_right.end()) continue;
    const size_t n = std::min(lefts.size(), it->second.size());
    for (size_t k = 0; k < n; ++k) {
      if (max_pairs && out.pairs.size() >= max_pairs) return out;
      const bool swap = (rng() & 1u) != 0;
      const Episode& a = swap ? *it->second[k] : *lefts[k];
      const Episode& b = swap ? *lefts[k] : *it->second[k];
      std::ostringstream id;
      id << "pair-" << std::setw(4) << std::setfill('0') << out.pairs.size() + 1;
      out.pairs.push_back({id.str(), a.task.scenario, render_transcript(a), render_transcript(b)});
      out.labeling[id.str()] =
          swap ? PairLabel{right_label, left_label} : PairLabel{left_label, right_label};
    }
  }
  return out;
}

std::string pairs_to_jsonl(const std::vector<BlindedPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += json{{"pair_id", p.pair_id},
                {"scenario", p.scenario},
                {"transcript_a", p.transcript_a},
                {"transcript_b", p.transcript_b}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<BlindedPair> pairs_from_jsonl(const std::string& text) {
  std::vector<BlindedPair> out;
  for (const auto& doc : parse_jsonl(text)) {
    out.push_back({doc.at("pair_id").get<std::string>(), doc.value("scenario", std::string()),
                   doc.at("transcript_a").get<std::string>(),
                   doc.at("transcript_b").get<std::string>()});
  }
  return out;
}

json labeling_to_json(const std::map<std::string, PairLabel>& labeling) {
  json out = json::object();
  for (const auto& [id, label] : labeling) out[id] = {{"A", label.a}, {"B", label.b}};
  return out;
}

std::map<std::string, PairLabel> labeling_from_json(const json& doc) {
  std::map<std::string, PairLabel> out;
  for (const auto& [id, label] : doc.items()) {
    out[id] = {label.at("A").get<std::string>(), label.at("B").get<std::string>()};
  }
  return out;
}

std::string choices_to_jsonl(const std::vector<NaturalnessChoice>& choices) {
  std::string out;
  for (const auto& c : choices) {
    out += json{{"pair_id", c.pair_id}, {"winner", c.winner == Side::kA ? "A" : "B"}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<NaturalnessChoice> choices_from_jsonl(const std::string& text) {
  std::vector<NaturalnessChoice> out;
  for (const auto& doc : parse_jsonl(text)) {
    out.push_back({doc.at("pair_id").get<std::string>(),
                   side_from_string(doc.at("winner").get<std::string>())});
  }
  return out;
}

std::vector<NaturalnessChoice> run_annotation_session(const std::vector<BlindedPair>& pairs,
                                                      std::istream& in, std::ostream& out) {
  std::vector<NaturalnessChoice> choices;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    out << "\n=== " << p.pair_id << " (" << i + 1 << "/" << pairs.size() << ") ===\n"
        << "Scenario: " << p.scenario << "\n\n--- A ---\n"
        << p.transcript_a << "\n\n--- B ---\n"
        << p.transcript_b << "\n\n";
    for (;;) {
      out << "Which interaction is more natural? [A/B, q to stop] " << std::flush;
      std::string answer;
      if (!std::getline(in, answer) || answer == "q" || answer == "Q") return choices;
      if (answer == "A" || answer == "a" || answer == "B" || answer == "b") {
        choices.push_back({p.pair_id, side_from_string(answer)});
        break;
      }
    }
  }
  return choices;
}

}  // namespace asymsim
