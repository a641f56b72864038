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

// Episode-level comparison metrics: verbosity, first-mention position,
// deal rate, naturalness win rate and the first-mention histogram.

#ifndef ASYMSIM_ANALYSIS_HPP_
#define ASYMSIM_ANALYSIS_HPP_

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymsim/domain.hpp"
#include "asymsim/evaluator.hpp"
#include "asymsim/stats.hpp"

namespace asymsim {

class NoCountedTurns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownPair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerbosityOptions {
  // When false only Speak turns count.
  bool count_non_verbal_and_action = true;
};

size_t whitespace_token_count(std::string_view text);

// Mean whitespace-token count over Speak/NonVerbal/Action turns.
double verbosity(const Episode& episode, VerbosityOptions options = {});

// Case-insensitive whole-word match; boundaries are non-alphanumeric bytes.
bool contains_whole_word(std::string_view haystack, std::string_view word);

// first mentioning turn / max(1, turns - 1); nullopt when never mentioned.
std::optional<double> first_mention_position(const Episode& episode, std::string_view name);

double deal_rate(const std::vector<DealJudgment>& judgments);

enum class Side { kA, kB };

struct NaturalnessChoice {
  std::string pair_id;
  Side winner = Side::kA;
};

struct PairLabel {
  std::string a;  // mode (or run label) shown as side A
  std::string b;
};

struct NaturalnessResult {
  std::map<std::string, double> win_rate;
  std::string focus;  // label the t test is computed for
  size_t n = 0;
  TTestResult test;   // per-choice win indicators for `focus` vs 0.5
};

// `focus` defaults to the lexicographically first label seen.
NaturalnessResult naturalness_win_rate(const std::vector<NaturalnessChoice>& choices,
                                       const std::map<std::string, PairLabel>& labeling,
                                       std::string focus = {});

inline constexpr size_t kHistogramBins = 10;

// Equal-width bins over [0, 1]; the last bin is closed on the right.
std::array<size_t, kHistogramBins> first_mention_histogram(const std::vector<double>& values);

// bin_start,bin_end,count
std::string histogram_csv(const std::array<size_t, kHistogramBins>& bins);

// The mutual friend this task is about, if it has one.
std::optional<std::string> mutual_friend_target(const SocialTask& task);

}  // namespace asymsim

#endif  // ASYMSIM_ANALYSIS_HPP_
