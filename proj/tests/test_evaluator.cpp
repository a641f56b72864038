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

#include "asymsim/evaluator.hpp"

#include "doctest.h"
#include "support/support.hpp"

namespace asymsim {
namespace {

using testing::donovan_benjamin;
using testing::make_turn;

Episode short_episode(const SocialTask& task) {
  return testing::make_episode(task, SimulationMode::kAgents,
                               {make_turn(0, 0, ActionType::kSpeak, "Would you take $400?"),
                                make_turn(1, 1, ActionType::kSpeak, "Deal."),
                                make_turn(2, 0, ActionType::kLeave)});
}

// Records every request it sees.
class SpyBackend : public Backend {
 public:
  explicit SpyBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  Completion complete(const GenerationRequest& request) override {
    requests.push_back(request);
    if (next_ >= replies_.size()) throw FixtureExhausted("spy exhausted");
    return Completion{replies_[next_++], {}, 1, 0.0};
  }
  std::string model() const override { return "judge"; }
  std::vector<GenerationRequest> requests;

 private:
  std::vector<std::string> replies_;
  size_t next_ = 0;
};

TEST_CASE("deal prompt fills the published template") {
  auto task = testing::bundled_tasks().at(1);
  std::string expected =
      "Given social goals and social interactions below, tell me whether the deal has been "
      "made.\n"
      "Agent one's goal: " + task.goals[0] + "\n"
      "Agent two's goal: " + task.goals[1] + "\n"
      "Social interactions:\n"
      "Mia Davis said: \"Would you take $400?\"\n"
      "Samuel Anderson said: \"Deal.\"\n"
      "Mia Davis left the conversation. \n"
      "\n"
      "Output format: <Reasoning> </Reasoning>, <Answer>(choose yes or no)</Answer>\n";
  CHECK(build_deal_prompt(task, short_episode(task)).text() == expected);
  Episode empty = short_episode(task);
  empty.turns.clear();
  CHECK_THROWS_AS(build_deal_prompt(task, empty), std::invalid_argument);
}

TEST_CASE("deal replies parse or raise, never default") {
  for (const auto& c : testing::deal_cases()) {
    CAPTURE(c.raw);
    if (c.expected) {
      CHECK(parse_deal(c.raw).answer == *c.expected);
    } else {
      CHECK_THROWS_AS(parse_deal(c.raw), UnparseableJudgment);
    }
  }
  CHECK(testing::deal_cases().size() == 20);
}

TEST_CASE("deal reasoning is kept and formats back") {
  DealJudgment d = parse_deal("<Reasoning> They agreed. </Reasoning>, <Answer>yes</Answer>");
  CHECK(d.reasoning == "They agreed.");
  CHECK(parse_deal(format_deal(d)) == d);
}

TEST_CASE("score blocks need every cell for both agents") {
  EvaluationScores s = testing::uniform_scores(7);
  s.agents[1].values[Dimension::kRel] = -3;
  CHECK(parse_scores(testing::rubric_reply(s)) == s);

  json doc = json::parse(testing::rubric_reply(s).substr(
      testing::rubric_reply(s).find('{'),
      testing::rubric_reply(s).rfind('}') - testing::rubric_reply(s).find('{') + 1));
  doc["agent_2"].erase("GOAL");
  CHECK_THROWS_AS(parse_scores(doc.dump()), UnparseableJudgment);
  doc.erase("agent_2");
  CHECK_THROWS_AS(parse_scores(doc.dump()), UnparseableJudgment);
  CHECK_THROWS_AS(parse_scores("no scores at all"), UnparseableJudgment);

  s.agents[0].values[Dimension::kGoal] = 11;
  CHECK_THROWS_AS(parse_scores(testing::rubric_reply(s)), ScoreRangeError);
}

TEST_CASE("bare numeric cells are accepted") {
  json doc;
  for (const char* agent : {"agent_1", "agent_2"}) {
    for (const auto& info : all_dimensions()) doc[agent][std::string(info.code)] = info.min;
  }
  auto s = parse_scores(doc.dump());
  CHECK(s.agents[1].values.at(Dimension::kSec) == -10);
}

TEST_CASE("judging runs at temperature zero and re-asks once") {
  const auto task = donovan_benjamin();
  SpyBackend judge({"garbage", testing::rubric_reply(testing::uniform_scores(9))});
  JudgeLog log;
  auto scores = score_episode(task, short_episode(task), judge, &log);
  CHECK(scores.agents[0].values.at(Dimension::kGoal) == 9);
  REQUIRE(judge.requests.size() == 2);
  CHECK(judge.requests[0].temperature == 0.0);
  CHECK(judge.requests[0].prompt.segments.size() == 1);
  CHECK(judge.requests[1].prompt.segments.size() == 2);
  CHECK(judge.requests[1].prompt.segments[1].text.find("could not be accepted") !=
        std::string::npos);
  REQUIRE(log.size() == 2);
  CHECK_FALSE(log[0].error.empty());
  CHECK(log[1].error.empty());
}

TEST_CASE("two rejected judge replies fail the judgment") {
  const auto task = donovan_benjamin();
  SpyBackend judge({"nope", "<Answer>perhaps</Answer>", "<Answer>yes</Answer>"});
  CHECK_THROWS_AS(judge_deal(task, short_episode(task), judge), JudgingFailed);
  CHECK(judge.requests.size() == 2);
}

TEST_CASE("incomplete episodes are not scored") {
  const auto task = donovan_benjamin();
  Episode e = short_episode(task);
  e.complete = false;
  SpyBackend judge({});
  CHECK_THROWS_AS(score_episode(task, e, judge), std::invalid_argument);
}

TEST_CASE("rubric version is stable and hash-derived") {
  CHECK(rubric_version().rfind("rubric-", 0) == 0);
  CHECK(rubric_version().size() == 7 + 12);
  auto prompt = build_rubric_prompt(donovan_benjamin(), short_episode(donovan_benjamin())).text();
  CHECK(prompt.find("GOAL (goal), range [0, 10]") != std::string::npos);
  CHECK(prompt.find("Agent 1 is Donovan Reeves. Agent 2 is Benjamin Jackson.") !=
        std::string::npos);
}

TEST_CASE("aggregates pool both agents with a sample deviation") {
  std::vector<EvaluationScores> all{testing::uniform_scores(2), testing::uniform_scores(4)};
  all[1].agents[1].values[Dimension::kGoal] = 8;
  // samples 2, 2, 4, 8: mean 4, sample variance (4+4+0+16)/3 = 8
  auto agg = aggregate_scores(all, Dimension::kGoal);
  CHECK(agg.n == 4);
  CHECK(agg.mean == doctest::Approx(4.0));
  CHECK(agg.stddev == doctest::Approx(std::sqrt(8.0)));
  CHECK_THROWS(aggregate_scores({}, Dimension::kGoal));
}

}  // namespace
}  // namespace asymsim
