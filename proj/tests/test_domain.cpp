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

#include "asymsim/domain.hpp"

#include "doctest.h"
#include "support/support.hpp"

namespace asymsim {
namespace {

using testing::donovan_benjamin;

TEST_CASE("friend list lines parse with company suffixes intact") {
  const std::string goal =
      "You know the following friends: \n"
      "Chris: Hobby: Mountain biking  Company: Henry Schein, Inc.  \n"
      "Jacob: Hobby: Shooting sport  Company: Maxim Integrated .\n"
      "not a friend line\n";
  auto friends = parse_friend_list(goal);
  REQUIRE(friends.size() == 2);
  CHECK(friends[0] == FriendEntry{"Chris", "Mountain biking", "Henry Schein, Inc."});
  CHECK(friends[1] == FriendEntry{"Jacob", "Shooting sport", "Maxim Integrated"});
}

TEST_CASE("bundled mutual-friends task has exactly one mutual friend") {
  const SocialTask& task = donovan_benjamin();
  auto lists = effective_friend_lists(task);
  CHECK(lists[0].size() == 5);
  CHECK(lists[1].size() == 5);
  CHECK(mutual_friends(lists[0], lists[1]) == std::vector<std::string>{"Jacob"});
  CHECK(validate_task(task).empty());
}

TEST_CASE("friend lists fall back to the goal text") {
  SocialTask task = donovan_benjamin();
  task.friend_lists = {};
  auto lists = effective_friend_lists(task);
  CHECK(mutual_friends(lists[0], lists[1]) == std::vector<std::string>{"Jacob"});
}

TEST_CASE("validate_task reports each violation") {
  SocialTask task = donovan_benjamin();
  task.participants[1].name = task.participants[0].name;
  CHECK(validate_task(task) == std::vector<std::string>{"participants.name duplicate"});

  task = donovan_benjamin();
  task.participants[0].name.clear();
  CHECK(validate_task(task) == std::vector<std::string>{"participants[0].name empty"});

  task = donovan_benjamin();
  task.friend_lists[1].reset();
  CHECK(validate_task(task) == std::vector<std::string>{"friend_lists missing"});

  task = donovan_benjamin();
  task.friend_lists[1] = std::vector<FriendEntry>{{"Zed", "Chess", "Acme"}};
  CHECK(validate_task(task) == std::vector<std::string>{"friend_lists intersection empty"});
}

TEST_CASE("action wire names round trip") {
  for (ActionType t : {ActionType::kNone, ActionType::kSpeak, ActionType::kNonVerbal,
                       ActionType::kAction, ActionType::kLeave}) {
    CHECK(action_from_wire(to_wire(t)) == t);
  }
  CHECK(to_wire(ActionType::kNonVerbal) == "non-verbal communication");
  CHECK_THROWS_AS(action_from_wire("shout"), std::invalid_argument);
  CHECK_FALSE(try_action_from_wire("Speak").has_value());
}

TEST_CASE("episodes survive a JSON round trip") {
  Episode e = testing::make_episode(
      donovan_benjamin(), SimulationMode::kMindreaders,
      {testing::make_turn(0, 0, ActionType::kSpeak, "Hi"),
       testing::make_turn(1, 1, ActionType::kLeave)},
      "x-0");
  e.provenance.models = {"m"};
  e.provenance.calls.push_back(CallRecord{0, 0, 1, "m", "h", "p", "r", "", 12.5});
  CHECK(json(e).get<Episode>() == e);
}

TEST_CASE("score ranges are enforced on decode") {
  EvaluationScores s = testing::uniform_scores(7);
  CHECK(json(s).get<EvaluationScores>() == s);
  s.agents[1].values[Dimension::kSec] = 1;
  CHECK(score_range_violations(s).size() == 1);
  CHECK_THROWS_AS(check_score_ranges(s), ScoreRangeError);
  CHECK_THROWS_AS(json(s).get<EvaluationScores>(), ScoreRangeError);
}

TEST_CASE("dimension table matches the judge bounds") {
  CHECK(dimension_info(Dimension::kBel).min == 0);
  CHECK(dimension_info(Dimension::kRel).min == -5);
  CHECK(dimension_info(Dimension::kSec).max == 0);
  CHECK(dimension_info(Dimension::kSoc).min == -10);
  CHECK(dimension_info(Dimension::kFin).max == 5);
  CHECK(dimension_from_code("GOAL") == Dimension::kGoal);
  CHECK_FALSE(dimension_from_code("XYZ").has_value());
}

TEST_CASE("load_tasks accepts arrays, wrapped lists and single objects") {
  testing::TempDir dir;
  json one = json(donovan_benjamin());
  one.erase("id");
  write_file(dir.str("single.json"), one.dump());
  write_file(dir.str("wrapped.json"), json{{"tasks", {one, one}}}.dump());
  auto single = load_tasks(dir.str("single.json"));
  REQUIRE(single.size() == 1);
  CHECK(single[0].id == "task0");
  auto wrapped = load_tasks(dir.str("wrapped.json"));
  REQUIRE(wrapped.size() == 2);
  CHECK(wrapped[1].id == "task1");
  CHECK(testing::bundled_tasks().size() == 3);
}

}  // namespace
}  // namespace asymsim
