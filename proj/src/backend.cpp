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

#include "asymsim/backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <thread>

#include "asymsim/hashing.hpp"

namespace asymsim {

int64_t SystemClock::now_ms() const {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_for_ms(int64_t ms) {
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

std::string format_timestamp(int64_t epoch_ms) {
  std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
  int64_t millis = epoch_ms % 1000;
  if (millis < 0) {
    millis += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0')
      << millis << 'Z';
  return out.str();
}

void GenerationRequest::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw std::invalid_argument("temperature must lie in [0, 2]");
  }
  if (max_output_tokens < 1) throw std::invalid_argument("max_output_tokens must be >= 1");
}

std::string prompt_hash(const PromptText& prompt) { return sha256_hex(prompt.text()); }

int64_t BackoffPolicy::delay_for_retry(int retry) const {
  double delay = static_cast<double>(base_ms) * std::pow(multiplier, retry - 1);
  if (delay > static_cast<double>(max_ms)) return max_ms;
  return static_cast<int64_t>(delay);
}

void BackendProfile::validate() const {
  if (max_retries < 0) throw std::invalid_argument("profile " + name + ": max_retries < 0");
  if (timeout_ms <= 0) throw std::invalid_argument("profile " + name + ": timeout must be > 0");
  if (kind == "chat") {
    if (endpoint.empty()) throw std::invalid_argument("profile " + name + ": endpoint missing");
    if (model.empty()) throw std::invalid_argument("profile " + name + ": model missing");
  } else if (kind == "fixture") {
    if (fixture_path.empty()) throw std::invalid_argument("profile " + name + ": fixture missing");
  } else {
    throw std::invalid_argument("profile " + name + ": unknown kind " + kind);
  }
}

void to_json(json& j, const BackendProfile& p) {
  j = json{{"name", p.name},
           {"kind", p.kind},
           {"endpoint", p.endpoint},
           {"model", p.model},
           {"api_key_env", p.api_key_env},
           {"timeout_ms", p.timeout_ms},
           {"max_retries", p.max_retries},
           {"backoff", {{"base_ms", p.backoff.base_ms},
                        {"multiplier", p.backoff.multiplier},
                        {"max_ms", p.backoff.max_ms}}},
           {"rate_limit_rpm", p.rate_limit_rpm},
           {"fixture", p.fixture_path}};
}

void from_json(const json& j, BackendProfile& p) {
  p.name = j.value("name", p.name);
  p.kind = j.value("kind", std::string("chat"));
  p.endpoint = j.value("endpoint", std::string());
  p.model = j.value("model", std::string());
  p.api_key_env = j.value("api_key_env", std::string());
  p.timeout_ms = j.value("timeout_ms", int64_t{60000});
  p.max_retries = j.value("max_retries", 3);
  if (auto it = j.find("backoff"); it != j.end()) {
    p.backoff.base_ms = it->value("base_ms", int64_t{1000});
    p.backoff.multiplier = it->value("multiplier", 2.0);
    p.backoff.max_ms = it->value("max_ms", int64_t{30000});
  }
  p.rate_limit_rpm = j.value("rate_limit_rpm", 0);
  p.fixture_path = j.value("fixture", std::string());
  if (p.model.empty() && p.kind == "fixture") p.model = "fixture";
}

std::map<std::string, BackendProfile> load_profiles(const std::string& path) {
  json doc = json::parse(read_file(path));
  const json& table = doc.contains("profiles") ? doc.at("profiles") : doc;
  std::map<std::string, BackendProfile> out;
  for (const auto& [name, body] : table.items()) {
    BackendProfile p;
    p.name = name;
    from_json(body, p);
    p.name = name;
    p.validate();
    out.emplace(name, std::move(p));
  }
  return out;
}

RateLimiter::RateLimiter(int requests_per_minute, std::shared_ptr<Clock> clock)
    : limit_(requests_per_minute), clock_(std::move(clock)) {}

void RateLimiter::acquire() {
  if (limit_ <= 0) return;
  constexpr int64_t kWindowMs = 60000;
  std::lock_guard<std::mutex> lock(mu_);
  for (;;) {
    int64_t now = clock_->now_ms();
    while (!issued_.empty() && issued_.front() <= now - kWindowMs) issued_.pop_front();
    if (issued_.size() < static_cast<size_t>(limit_)) {
      issued_.push_back(now);
      return;
    }
    clock_->sleep_for_ms(issued_.front() + kWindowMs - now);
  }
}

size_t RateLimiter::issued_in_window() {
  std::lock_guard<std::mutex> lock(mu_);
  int64_t now = clock_->now_ms();
  size_t n = 0;
  for (int64_t t : issued_) n += (t > now - 60000);
  return n;
}

std::string chat_completions_url(const std::string& endpoint) {
  constexpr std::string_view kSuffix = "/chat/completions";
  if (endpoint.size() >= kSuffix.size() &&
      endpoint.compare(endpoint.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
    return endpoint;
  }
  std::string base = endpoint;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + std::string(kSuffix);
}

json build_chat_request_body(const BackendProfile& profile, const GenerationRequest& request) {
  json messages = json::array();
  for (const auto& segment : request.prompt.segments) {
    if (segment.role == Role::kSystem && segment.text.empty()) continue;
    messages.push_back({{"role", std::string(to_string(segment.role))}, {"content", segment.text}});
  }
  json body{{"model", profile.model},
            {"messages", messages},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens}};
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
  return body;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* value = std::getenv(name.c_str());
    if (!value) return std::nullopt;
    return std::string(value);
  };
}

ChatCompletionsBackend::ChatCompletionsBackend(BackendProfile profile,
                                               std::shared_ptr<HttpTransport> transport,
                                               std::shared_ptr<Clock> clock,
                                               std::shared_ptr<RateLimiter> limiter,
                                               EnvLookup env)
    : profile_(std::move(profile)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      limiter_(std::move(limiter)),
      env_(std::move(env)) {}

Completion ChatCompletionsBackend::complete(const GenerationRequest& request) {
  request.validate();
  std::vector<std::pair<std::string, std::string>> headers;
  if (!profile_.api_key_env.empty()) {
    auto key = env_(profile_.api_key_env);
    if (!key || key->empty()) {
      throw AuthError("credential env var " + profile_.api_key_env + " is not set");
    }
    headers.emplace_back("Authorization", "Bearer " + *key);
  }
  const std::string url = chat_completions_url(profile_.endpoint);
  const std::string body = build_chat_request_body(profile_, request).dump();

  const int max_attempts = profile_.max_retries + 1;
  std::string last_error;
  bool last_timed_out = false;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) clock_->sleep_for_ms(profile_.backoff.delay_for_retry(attempt - 1));
    if (limiter_) limiter_->acquire();
    int64_t started = clock_->now_ms();
    HttpResponse response = transport_->post_json(url, headers, body, profile_.timeout_ms);
    double latency = static_cast<double>(clock_->now_ms() - started);

    last_timed_out = response.timed_out;
    if (response.status == 200) {
      json doc = json::parse(response.body, nullptr, false);
      if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
        last_error = "malformed completion body";
        continue;
      }
      const json& message = doc["choices"][0].value("message", json::object());
      Completion out;
      out.text = message.value("content", std::string());
      if (auto usage = doc.find("usage"); usage != doc.end() && usage->is_object()) {
        out.usage.prompt_tokens = usage->value("prompt_tokens", int64_t{0});
        out.usage.completion_tokens = usage->value("completion_tokens", int64_t{0});
      }
      out.attempts = attempt;
      out.latency_ms = latency;
      return out;
    }
    if (response.status == 401 || response.status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(response.status) +
                      ")");
    }
    bool retryable = response.status == 0 || response.status == 429 || response.status >= 500;
    last_error = response.status == 0 ? (response.timed_out ? "timeout: " : "transport: ") +
                                            response.error
                                      : "HTTP " + std::to_string(response.status);
    if (!retryable) throw BackendError(last_error + ": " + response.body.substr(0, 512));
  }
  if (last_timed_out) throw TimeoutError(last_error, max_attempts);
  throw BackendExhausted(last_error, max_attempts);
}

std::unique_ptr<FixtureBackend> FixtureBackend::sequential(std::vector<std::string> replies,
                                                           std::string model) {
  std::unique_ptr<FixtureBackend> backend(new FixtureBackend());
  backend->model_ = std::move(model);
  backend->replies_ = std::move(replies);
  return backend;
}

std::unique_ptr<FixtureBackend> FixtureBackend::by_hash(std::map<std::string, std::string> replies,
                                                        std::string model) {
  std::unique_ptr<FixtureBackend> backend(new FixtureBackend());
  backend->keyed_ = true;
  backend->model_ = std::move(model);
  backend->by_hash_ = std::move(replies);
  return backend;
}

Completion FixtureBackend::complete(const GenerationRequest& request) {
  request.validate();
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  Completion out;
  if (keyed_) {
    std::string hash = prompt_hash(request.prompt);
    auto it = by_hash_.find(hash);
    if (it == by_hash_.end()) throw FixtureExhausted("no fixture reply for prompt " + hash);
    out.text = it->second;
    return out;
  }
  if (next_ >= replies_.size()) {
    throw FixtureExhausted("fixture exhausted after " + std::to_string(replies_.size()) +
                           " replies");
  }
  out.text = replies_[next_++];
  return out;
}

FixtureSpec FixtureSpec::parse(const json& doc) {
  FixtureSpec spec;
  spec.model = doc.value("model", std::string("fixture"));
  std::string mode = doc.value("mode", std::string("sequential"));
  if (mode == "map") {
    spec.keyed = true;
    spec.by_hash = doc.at("replies").get<std::map<std::string, std::string>>();
    return spec;
  }
  if (mode != "sequential") throw std::invalid_argument("unknown fixture mode " + mode);
  auto read_streams = [](const json& holder) {
    auto streams = holder.at("streams").get<std::vector<std::vector<std::string>>>();
    if (streams.empty()) throw std::invalid_argument("fixture variant has no streams");
    return streams;
  };
  if (doc.contains("variants")) {
    for (const auto& variant : doc.at("variants")) spec.variants.push_back(read_streams(variant));
  } else {
    spec.variants.push_back(read_streams(doc));
  }
  if (spec.variants.empty()) throw std::invalid_argument("fixture has no variants");
  return spec;
}

FixtureSpec FixtureSpec::load(const std::string& path) {
  return parse(json::parse(read_file(path)));
}

std::unique_ptr<Backend> FixtureSpec::make(size_t variant, size_t stream) const {
  if (keyed) return FixtureBackend::by_hash(by_hash, model);
  const auto& streams = variants.at(variant % variants.size());
  const auto& replies = streams[std::min(stream, streams.size() - 1)];
  return FixtureBackend::sequential(replies, model);
}

BackendFactory::BackendFactory(BackendProfile profile, std::shared_ptr<Clock> clock,
                               std::shared_ptr<HttpTransport> transport)
    : profile_(std::move(profile)), clock_(std::move(clock)), transport_(std::move(transport)) {
  profile_.validate();
  if (profile_.kind == "fixture") {
    fixture_ = FixtureSpec::load(profile_.fixture_path);
    if (profile_.model.empty() || profile_.model == "fixture") profile_.model = fixture_->model;
  } else {
    if (!transport_) transport_ = make_http_transport();
    limiter_ = std::make_shared<RateLimiter>(profile_.rate_limit_rpm, clock_);
  }
}

std::unique_ptr<Backend> BackendFactory::make(size_t variant, size_t stream) const {
  if (fixture_) return fixture_->make(variant, stream);
  return std::make_unique<ChatCompletionsBackend>(profile_, transport_, clock_, limiter_);
}

size_t BackendFactory::variant_count() const {
  if (fixture_ && !fixture_->keyed) return fixture_->variants.size();
  return 1;
}

}  // namespace asymsim
