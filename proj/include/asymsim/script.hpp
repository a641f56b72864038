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

// Omniscient script generation and the line grammar that turns a script
// back into structured turns.

#ifndef ASYMSIM_SCRIPT_HPP_
#define ASYMSIM_SCRIPT_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asymsim/backend.hpp"
#include "asymsim/domain.hpp"
#include "asymsim/engine.hpp"

namespace asymsim {

struct ParsedLine {
  int speaker = 0;
  ActionType action = ActionType::kNone;
  std::string argument;

  bool operator==(const ParsedLine&) const = default;
};

struct Skip {
  std::string reason;

  bool operator==(const Skip&) const = default;
};

using LineResult = std::variant<ParsedLine, Skip>;

struct SkippedLine {
  int line_no = 0;  // 1-based
  std::string text;
  std::string reason;
};

struct ScriptParseReport {
  std::vector<Turn> turns;
  std::vector<SkippedLine> skipped_lines;
  bool truncated_at_leave = false;
};

enum class ParseStrictness { kLenient, kStrict };

class ScriptParseError : public std::runtime_error {
 public:
  ScriptParseError(const std::string& what, ScriptParseReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const ScriptParseReport& report() const { return report_; }

 private:
  ScriptParseReport report_;
};

class EmptyScript : public std::runtime_error {
 public:
  EmptyScript(const std::string& what, Episode partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Episode& partial() const { return partial_; }

 private:
  Episode partial_;
};

// Typographic quotes become ASCII quotes.
std::string normalize_quotes(std::string_view text);

LineResult parse_script_line(std::string_view line, const std::array<std::string, 2>& names);

// Stops at the first Leave. Speaker alternation is not enforced. Strict
// mode throws ScriptParseError when any non-blank line was skipped.
ScriptParseReport parse_script(std::string_view text, const std::array<std::string, 2>& names,
                               ParseStrictness strictness = ParseStrictness::kLenient);

// One backend call; turns past config.max_turns are dropped.
Episode run_script_episode(const SocialTask& task, Backend& backend, const EngineConfig& config,
                           const EpisodeContext& context = {});

// Script and judge calls get a larger budget than agent turns.
inline constexpr int kLongOutputTokens = 4096;

}  // namespace asymsim

#endif  // ASYMSIM_SCRIPT_HPP_
