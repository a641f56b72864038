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

#include "doctest.h"
#include "support/support.hpp"

namespace asymsim {
namespace {

using testing::action_json;
using testing::donovan_benjamin;

struct Recorder : EpisodeObserver {
  int calls = 0;
  std::vector<Turn> turns;
  void on_call(const Episode&, const CallRecord&) override { ++calls; }
  void on_turn(const Episode&, const Turn& t) override { turns.push_back(t); }
};

std::vector<std::string> speak_n(int n, const std::string& word) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(action_json(ActionType::kSpeak, word + std::to_string(i)));
  }
  return out;
}

TEST_CASE("parse_action accepts the wire envelope and surrounding prose") {
  auto a = parse_action(R"({"action_type": "speak", "argument": "hi"})");
  CHECK(a.action_type == ActionType::kSpeak);
  CHECK(a.argument == "hi");
  a = parse_action("Sure! {\"note\": {}} then {\"action_type\": \"leave\", \"argument\": \"bye\"}");
  CHECK(a.action_type == ActionType::kLeave);
  CHECK(a.argument.empty());
  a = parse_action(R"({"action_type": "non-verbal communication", "argument": "waves {x}"})");
  CHECK(a.argument == "waves {x}");
}

TEST_CASE("parse_action rejects malformed envelopes") {
  for (const char* raw :
       {"", "no json here", R"({"action_type": "shout", "argument": "x"})",
        R"({"action_type": "speak"})", R"({"action_type": "speak", "argument": 3})",
        R"({"action_type": "speak", "argument": "   "})", R"({"action_type": 1, "argument": ""})"}) {
    CAPTURE(raw);
    CHECK_THROWS_AS(parse_action(raw), MalformedAction);
  }
}

TEST_CASE("serialize_action round trips through parse_action") {
  ActionEnvelope a{ActionType::kAction, "opens the \"door\"\n"};
  CHECK(serialize_action(a) ==
        R"({"action_type": "action", "argument": "opens the \"door\"\n"})");
  auto back = parse_action(serialize_action(a));
  CHECK(back.action_type == a.action_type);
  CHECK(back.argument == a.argument);
}

TEST_CASE("speakers alternate and the turn cap holds") {
  auto first = FixtureBackend::sequential(speak_n(20, "a"));
  auto second = FixtureBackend::sequential(speak_n(20, "b"));
  EngineConfig config;
  config.max_turns = 7;
  VirtualClock clock;
  Recorder rec;
  Episode e = run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                      {first.get(), second.get()},
                                      VisibilityPolicy::agents_default(), config,
                                      {"e1", &clock, &rec});
  REQUIRE(e.turns.size() == 7);
  CHECK(e.complete);
  for (size_t i = 0; i < e.turns.size(); ++i) {
    CHECK(e.turns[i].speaker == static_cast<int>(i % 2));
    CHECK(e.turns[i].index == static_cast<int>(i));
  }
  CHECK(e.turns[2].argument == "a1");
  CHECK(rec.calls == 7);
  CHECK(rec.turns == e.turns);
  CHECK(e.provenance.temperature == doctest::Approx(0.7));
  CHECK(e.provenance.calls.size() == 7);
}

TEST_CASE("start speaker can be the second participant") {
  auto first = FixtureBackend::sequential(speak_n(5, "a"));
  auto second = FixtureBackend::sequential(speak_n(5, "b"));
  EngineConfig config;
  config.max_turns = 3;
  config.start_speaker = 1;
  VirtualClock clock;
  Episode e = run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                      {first.get(), second.get()},
                                      VisibilityPolicy::agents_default(), config, {"e", &clock});
  CHECK(e.turns[0].speaker == 1);
  CHECK(e.turns[0].argument == "b0");
}

TEST_CASE("a leave ends the episode") {
  auto first = FixtureBackend::sequential(
      {action_json(ActionType::kSpeak, "hi"), action_json(ActionType::kLeave)});
  auto second = FixtureBackend::sequential(speak_n(5, "b"));
  VirtualClock clock;
  Episode e = run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                      {first.get(), second.get()},
                                      VisibilityPolicy::agents_default(), {}, {"e", &clock});
  REQUIRE(e.turns.size() == 3);
  CHECK(e.turns.back().action == ActionType::kLeave);
  CHECK(e.complete);
}

TEST_CASE("malformed replies are retried and logged") {
  auto first = FixtureBackend::sequential(
      {"not json", R"({"action_type": "yell", "argument": "x"})",
       action_json(ActionType::kLeave)});
  auto second = FixtureBackend::sequential({});
  VirtualClock clock;
  Episode e = run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                      {first.get(), second.get()},
                                      VisibilityPolicy::agents_default(), {}, {"e", &clock});
  REQUIRE(e.provenance.calls.size() == 3);
  CHECK(e.provenance.calls[0].attempt == 1);
  CHECK(e.provenance.calls[2].attempt == 3);
  CHECK_FALSE(e.provenance.calls[1].error.empty());
  CHECK(e.provenance.calls[2].error.empty());
  CHECK(e.turns.size() == 1);
}

TEST_CASE("exhausted malformed retries abort with the partial episode") {
  auto first = FixtureBackend::sequential({action_json(ActionType::kSpeak, "hi")});
  auto second = FixtureBackend::sequential({"x", "x", "x", "x", "x"});
  EngineConfig config;
  config.malformed_retries = 3;
  VirtualClock clock;
  try {
    run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                            {first.get(), second.get()}, VisibilityPolicy::agents_default(),
                            config, {"e", &clock});
    FAIL("expected EpisodeAborted");
  } catch (const EpisodeAborted& e) {
    CHECK(e.turn() == 1);
    CHECK(e.partial().turns.size() == 1);
    CHECK_FALSE(e.partial().complete);
    CHECK(e.partial().provenance.calls.size() == 5);
    CHECK_FALSE(e.partial().provenance.abort_reason.empty());
  }
  CHECK(second->calls() == 4);
}

TEST_CASE("backend failures abort immediately") {
  auto first = FixtureBackend::sequential({});
  auto second = FixtureBackend::sequential({});
  VirtualClock clock;
  CHECK_THROWS_AS(run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                          {first.get(), second.get()},
                                          VisibilityPolicy::agents_default(), {}, {"e", &clock}),
                  EpisodeAborted);
}

TEST_CASE("prompt logging can be disabled without losing hashes") {
  auto first = FixtureBackend::sequential({action_json(ActionType::kLeave)});
  auto second = FixtureBackend::sequential({});
  EngineConfig config;
  config.log_prompts = false;
  VirtualClock clock;
  Episode e = run_interactive_episode(donovan_benjamin(), SimulationMode::kAgents,
                                      {first.get(), second.get()},
                                      VisibilityPolicy::agents_default(), config, {"e", &clock});
  CHECK(e.provenance.calls[0].prompt.empty());
  CHECK(e.provenance.calls[0].prompt_hash.size() == 64);
}

TEST_CASE("engine config validates and round trips") {
  EngineConfig c;
  c.max_turns = 0;
  CHECK_THROWS(c.validate());
  c = EngineConfig{};
  c.style_addendum = "Be brief.";
  CHECK(json(c).get<EngineConfig>() == c);
}

TEST_CASE("script mode is rejected by the interactive engine") {
  auto b = FixtureBackend::sequential({});
  CHECK_THROWS_AS(run_interactive_episode(donovan_benjamin(), SimulationMode::kScript,
                                          {b.get(), b.get()}, VisibilityPolicy::omniscient(), {}),
                  std::invalid_argument);
}

}  // namespace
}  // namespace asymsim
