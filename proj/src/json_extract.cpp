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

#include "asymsim/json_extract.hpp"

namespace asymsim {

namespace {

// End offset (exclusive) of the brace group opening at `start`, honoring
// JSON string escapes; npos when unbalanced.
size_t balanced_end(std::string_view text, size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::optional<json> extract_first_json_object(std::string_view text) {
  for (size_t pos = text.find('{'); pos != std::string_view::npos;
       pos = text.find('{', pos + 1)) {
    size_t end = balanced_end(text, pos);
    if (end == std::string_view::npos) continue;
    json parsed = json::parse(text.substr(pos, end - pos), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

std::optional<json> extract_fenced_or_first_json_object(std::string_view text) {
  constexpr std::string_view kFence = "```json";
  if (size_t open = text.find(kFence); open != std::string_view::npos) {
    size_t body = open + kFence.size();
    size_t close = text.find("```", body);
    if (close != std::string_view::npos) {
      if (auto obj = extract_first_json_object(text.substr(body, close - body))) return obj;
    }
  }
  return extract_first_json_object(text);
}

}  // namespace asymsim
