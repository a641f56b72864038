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

// Text-generation backends: a chat-completions HTTP client with retry,
// backoff and rate limiting, and deterministic fixture backends for tests
// and offline runs. Time goes through Clock so backoff and rate limiting
// can run on a virtual clock.

#ifndef ASYMSIM_BACKEND_HPP_
#define ASYMSIM_BACKEND_HPP_

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asymsim/domain.hpp"
#include "asymsim/prompt.hpp"

namespace asymsim {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_ms() const = 0;
  virtual void sleep_for_ms(int64_t ms) = 0;
};

class SystemClock : public Clock {
 public:
  int64_t now_ms() const override;
  void sleep_for_ms(int64_t ms) override;
};

// Sleeping advances the clock instantly.
class VirtualClock : public Clock {
 public:
  explicit VirtualClock(int64_t start_ms = 0) : now_(start_ms) {}
  int64_t now_ms() const override { return now_.load(); }
  void sleep_for_ms(int64_t ms) override {
    if (ms > 0) now_ += ms;
  }
  void advance(int64_t ms) { now_ += ms; }

 private:
  std::atomic<int64_t> now_;
};

// ISO-8601 UTC with millisecond precision.
std::string format_timestamp(int64_t epoch_ms);

struct GenerationRequest {
  PromptText prompt;
  double temperature = 0.7;
  int max_output_tokens = 512;
  std::vector<std::string> stop_sequences;

  void validate() const;
};

struct Usage {
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  Usage usage;
  int attempts = 1;
  double latency_ms = 0.0;
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BackendExhausted : public BackendError {
 public:
  BackendExhausted(std::string last_error, int attempts)
      : BackendError("backend exhausted after " + std::to_string(attempts) +
                     " attempts: " + last_error),
        last_error_(std::move(last_error)),
        attempts_(attempts) {}
  const std::string& last_error() const { return last_error_; }
  int attempts() const { return attempts_; }

 private:
  std::string last_error_;
  int attempts_;
};

// Retries exhausted and the final failure was a timeout.
class TimeoutError : public BackendExhausted {
 public:
  using BackendExhausted::BackendExhausted;
};

class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

class FixtureExhausted : public BackendError {
 public:
  using BackendError::BackendError;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual Completion complete(const GenerationRequest& request) = 0;
  virtual std::string model() const = 0;
};

std::string prompt_hash(const PromptText& prompt);

struct BackoffPolicy {
  int64_t base_ms = 1000;
  double multiplier = 2.0;
  int64_t max_ms = 30000;

  // Delay before retry number `retry` (1-based).
  int64_t delay_for_retry(int retry) const;
};

struct BackendProfile {
  std::string name;
  std::string kind = "chat";  // "chat" or "fixture"
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  int64_t timeout_ms = 60000;
  int max_retries = 3;
  BackoffPolicy backoff;
  int rate_limit_rpm = 0;  // 0 = unlimited
  std::string fixture_path;

  void validate() const;
};

void to_json(json& j, const BackendProfile& p);
void from_json(const json& j, BackendProfile& p);

// Accepts {"profiles": {name: {...}}} or a bare {name: {...}} map.
std::map<std::string, BackendProfile> load_profiles(const std::string& path);

struct HttpResponse {
  int status = 0;  // 0 when the request never produced a response
  std::string body;
  std::string error;
  bool timed_out = false;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post_json(const std::string& url,
                                 const std::vector<std::pair<std::string, std::string>>& headers,
                                 const std::string& body, int64_t timeout_ms) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport();

// Sliding 60 s window shared by every caller of one profile.
class RateLimiter {
 public:
  RateLimiter(int requests_per_minute, std::shared_ptr<Clock> clock);
  void acquire();
  size_t issued_in_window();

 private:
  int limit_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<int64_t> issued_;
};

std::string chat_completions_url(const std::string& endpoint);
json build_chat_request_body(const BackendProfile& profile, const GenerationRequest& request);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

class ChatCompletionsBackend : public Backend {
 public:
  ChatCompletionsBackend(BackendProfile profile, std::shared_ptr<HttpTransport> transport,
                         std::shared_ptr<Clock> clock,
                         std::shared_ptr<RateLimiter> limiter = nullptr,
                         EnvLookup env = process_env());

  Completion complete(const GenerationRequest& request) override;
  std::string model() const override { return profile_.model; }

 private:
  BackendProfile profile_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<RateLimiter> limiter_;
  EnvLookup env_;
};

class FixtureBackend : public Backend {
 public:
  static std::unique_ptr<FixtureBackend> sequential(std::vector<std::string> replies,
                                                    std::string model = "fixture");
  static std::unique_ptr<FixtureBackend> by_hash(std::map<std::string, std::string> replies,
                                                 std::string model = "fixture");

  Completion complete(const GenerationRequest& request) override;
  std::string model() const override { return model_; }
  size_t calls() const { return calls_; }

 private:
  FixtureBackend() = default;

  bool keyed_ = false;
  std::string model_;
  std::vector<std::string> replies_;
  std::map<std::string, std::string> by_hash_;
  size_t next_ = 0;
  size_t calls_ = 0;
  std::mutex mu_;
};

// A fixture file: either {"mode":"map","replies":{hash: text}} or
// {"mode":"sequential","streams":[[...], [...]]} with optional
// "variants":[{"streams":[...]}, ...]. Each stream feeds one agent.
struct FixtureSpec {
  std::string model = "fixture";
  bool keyed = false;
  std::vector<std::vector<std::vector<std::string>>> variants;
  std::map<std::string, std::string> by_hash;

  static FixtureSpec parse(const json& doc);
  static FixtureSpec load(const std::string& path);

  // A fresh backend for one stream; streams past the end reuse the last one.
  std::unique_ptr<Backend> make(size_t variant, size_t stream) const;
};

// Builds per-episode backends from a profile. Chat backends share the
// transport and rate limiter; fixture backends are fresh per episode.
class BackendFactory {
 public:
  BackendFactory(BackendProfile profile, std::shared_ptr<Clock> clock,
                 std::shared_ptr<HttpTransport> transport = nullptr);

  std::unique_ptr<Backend> make(size_t variant, size_t stream) const;
  size_t variant_count() const;
  const BackendProfile& profile() const { return profile_; }
  const std::shared_ptr<Clock>& clock() const { return clock_; }

 private:
  BackendProfile profile_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  std::optional<FixtureSpec> fixture_;
};

}  // namespace asymsim

#endif  // ASYMSIM_BACKEND_HPP_
