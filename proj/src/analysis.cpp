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

#include "asymsim/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace asymsim {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0; }

bool iequal(unsigned char a, unsigned char b) { return std::tolower(a) == std::tolower(b); }

}  // namespace

size_t whitespace_token_count(std::string_view text) {
  size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

double verbosity(const Episode& episode, VerbosityOptions options) {
  size_t counted = 0;
  size_t tokens = 0;
  for (const auto& turn : episode.turns) {
    bool counts = turn.action == ActionType::kSpeak ||
                  (options.count_non_verbal_and_action &&
                   (turn.action == ActionType::kNonVerbal || turn.action == ActionType::kAction));
    if (!counts) continue;
    ++counted;
    tokens += whitespace_token_count(turn.argument);
  }
  if (counted == 0) throw NoCountedTurns("episode " + episode.id + " has no counted turns");
  return static_cast<double>(tokens) / static_cast<double>(counted);
}

bool contains_whole_word(std::string_view haystack, std::string_view word) {
  if (word.empty() || word.size() > haystack.size()) return false;
  for (size_t i = 0; i + word.size() <= haystack.size(); ++i) {
    bool match = true;
    for (size_t k = 0; k < word.size(); ++k) {
      if (!iequal(static_cast<unsigned char>(haystack[i + k]),
                  static_cast<unsigned char>(word[k]))) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    bool left_ok = i == 0 || !is_word_byte(static_cast<unsigned char>(haystack[i - 1]));
    size_t end = i + word.size();
    bool right_ok =
        end == haystack.size() || !is_word_byte(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
  }
  return false;
}

std::optional<double> first_mention_position(const Episode& episode, std::string_view name) {
  if (episode.turns.empty()) throw std::invalid_argument("first_mention_position needs turns");
  const size_t denom = std::max<size_t>(1, episode.turns.size() - 1);
  for (size_t i = 0; i < episode.turns.size(); ++i) {
    if (contains_whole_word(episode.turns[i].argument, name)) {
      return static_cast<double>(i) / static_cast<double>(denom);
    }
  }
  return std::nullopt;
}

double deal_rate(const std::vector<DealJudgment>& judgments) {
  if (judgments.empty()) throw std::invalid_argument("deal_rate needs at least one judgment");
  size_t yes = 0;
  for (const auto& j : judgments) yes += j.answer ? 1 : 0;
  return static_cast<double>(yes) / static_cast<double>(judgments.size());
}

NaturalnessResult naturalness_win_rate(const std::vector<NaturalnessChoice>& choices,
                                       const std::map<std::string, PairLabel>& labeling,
                                       std::string focus) {
  if (choices.empty()) throw std::invalid_argument("naturalness_win_rate needs choices");
  std::vector<std::string> winners;
  std::set<std::string> labels;
  winners.reserve(choices.size());
  for (const auto& choice : choices) {
    auto it = labeling.find(choice.pair_id);
    if (it == labeling.end()) throw UnknownPair("no labeling for pair " + choice.pair_id);
    labels.insert(it->second.a);
    labels.insert(it->second.b);
    winners.push_back(choice.winner == Side::kA ? it->second.a : it->second.b);
  }
  NaturalnessResult out;
  out.n = choices.size();
  out.focus = focus.empty() ? *labels.begin() : focus;
  for (const auto& label : labels) {
    size_t wins = 0;
    for (const auto& w : winners) wins += (w == label);
    out.win_rate[label] = static_cast<double>(wins) / static_cast<double>(out.n);
  }
  std::vector<double> indicators;
  indicators.reserve(winners.size());
  for (const auto& w : winners) indicators.push_back(w == out.focus ? 1.0 : 0.0);
  if (indicators.size() >= 2) out.test = one_sample_t_test(indicators, 0.5);
  return out;
}

std::array<size_t, kHistogramBins> first_mention_histogram(const std::vector<double>& values) {
  std::array<size_t, kHistogramBins> bins{};
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("histogram value outside [0, 1]");
    auto bin = static_cast<size_t>(std::floor(v * static_cast<double>(kHistogramBins)));
    bins[std::min(bin, kHistogramBins - 1)]++;
  }
  return bins;
}

std::string histogram_csv(const std::array<size_t, kHistogramBins>& bins) {
  std::ostringstream out;
  out << "bin_start,bin_end,count\n";
  for (size_t i = 0; i < bins.size(); ++i) {
    out << std::fixed << std::setprecision(1) << static_cast<double>(i) / kHistogramBins << ","
        << static_cast<double>(i + 1) / kHistogramBins << "," << bins[i] << "\n";
  }
  return out.str();
}

std::optional<std::string> mutual_friend_target(const SocialTask& task) {
  auto lists = effective_friend_lists(task);
  auto common = mutual_friends(lists[0], lists[1]);
  if (common.empty()) return std::nullopt;
  return common.front();
}

}  // namespace asymsim
