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

// LLM-judge scoring: the seven-dimension rubric and the yes/no deal
// judgment, with strict parsing and a single re-ask before giving up.

#ifndef ASYMSIM_EVALUATOR_HPP_
#define ASYMSIM_EVALUATOR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asymsim/backend.hpp"
#include "asymsim/domain.hpp"
#include "asymsim/prompt.hpp"

namespace asymsim {

struct DealJudgment {
  std::string reasoning;
  bool answer = false;

  bool operator==(const DealJudgment&) const = default;
};

void to_json(json& j, const DealJudgment& d);
void from_json(const json& j, DealJudgment& d);

class UnparseableJudgment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class JudgingFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kJudgeTemperature = 0.0;

// Throws std::invalid_argument for an episode without turns.
PromptText build_deal_prompt(const SocialTask& task, const Episode& episode);
DealJudgment parse_deal(std::string_view raw);
std::string format_deal(const DealJudgment& judgment);

// Hash of the static rubric text; changes whenever the rubric wording does.
const std::string& rubric_version();
PromptText build_rubric_prompt(const SocialTask& task, const Episode& episode);
// Requires all seven dimensions for both agents. Throws UnparseableJudgment
// on shape errors and ScoreRangeError on bound violations.
EvaluationScores parse_scores(std::string_view raw);

// Judge calls made while scoring, for provenance.
using JudgeLog = std::vector<CallRecord>;

EvaluationScores score_episode(const SocialTask& task, const Episode& episode, Backend& judge,
                               JudgeLog* log = nullptr);
DealJudgment judge_deal(const SocialTask& task, const Episode& episode, Backend& judge,
                        JudgeLog* log = nullptr);

struct ScoreAggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1); 0 when n == 1
  size_t n = 0;
};

// Each agent of each episode contributes one sample.
ScoreAggregate aggregate_scores(const std::vector<EvaluationScores>& scores, Dimension dimension);

}  // namespace asymsim

#endif  // ASYMSIM_EVALUATOR_HPP_
