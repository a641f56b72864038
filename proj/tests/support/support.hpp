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

// Shared fixtures for the unit and acceptance tests.

#ifndef ASYMSIM_TESTS_SUPPORT_HPP_
#define ASYMSIM_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "asymsim/backend.hpp"
#include "asymsim/domain.hpp"
#include "asymsim/evaluator.hpp"

namespace asymsim::testing {

std::string data_path(const std::string& rel);
std::string golden(const std::string& name);
std::vector<SocialTask> bundled_tasks();
const SocialTask& donovan_benjamin();

// Removes itself on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = {}) const;

 private:
  std::filesystem::path path_;
};

Turn make_turn(int index, int speaker, ActionType action, std::string argument = {});
Episode make_episode(const SocialTask& task, SimulationMode mode, std::vector<Turn> turns,
                     std::string id = "ep", bool complete = true);

std::string action_json(ActionType action, const std::string& argument = {});

// `n` Speak turns of `tokens[i]` words each.
Episode episode_with_token_counts(const SocialTask& task, const std::vector<int>& tokens,
                                  std::string id = "ep");

// `turns` Speak turns; turn `mention_at` (if any) names `target`.
Episode mention_episode(const SocialTask& task, int turns, std::optional<int> mention_at,
                        const std::string& target, std::string id = "ep");

// One episode per entry of `groups` (count, tokens per turn), three turns each.
std::vector<Episode> verbosity_corpus(const std::vector<std::pair<int, int>>& groups);

// Episodes of `turns` turns whose first mention of the task's mutual friend is
// at each index in `positions`, plus `absent` episodes that never mention it.
std::vector<Episode> first_mention_corpus(const SocialTask& task, const std::vector<int>& positions,
                                          int turns, int absent);

// Alternating turns with random actions and grammar-safe arguments; Leave
// only ever appears last. `length` of 0 picks a length in [1, 20].
Episode random_episode(std::mt19937_64& rng, const SocialTask& task, std::string id,
                       int length = 0);

struct DealCase {
  std::string raw;
  std::optional<bool> expected;  // nullopt: must raise
};

// Judge replies in the deal-formation output format, including variants.
const std::vector<DealCase>& deal_cases();

std::string rubric_reply(const EvaluationScores& scores);
EvaluationScores uniform_scores(double goal);

// Replays canned responses and records each request.
class StubTransport : public HttpTransport {
 public:
  struct Request {
    std::string url;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    int64_t timeout_ms;
  };

  explicit StubTransport(std::deque<HttpResponse> responses) : responses_(std::move(responses)) {}

  HttpResponse post_json(const std::string& url,
                         const std::vector<std::pair<std::string, std::string>>& headers,
                         const std::string& body, int64_t timeout_ms) override;

  std::vector<Request> requests() const;

  static HttpResponse ok(const std::string& content);

 private:
  mutable std::mutex mu_;
  std::deque<HttpResponse> responses_;
  std::vector<Request> requests_;
};

}  // namespace asymsim::testing

#endif  // ASYMSIM_TESTS_SUPPORT_HPP_
