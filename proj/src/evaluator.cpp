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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "asymsim/hashing.hpp"
#include "asymsim/json_extract.hpp"
#include "asymsim/script.hpp"

namespace asymsim {

namespace {

constexpr std::string_view kDealTemplateHead =
    "Given social goals and social interactions below, tell me whether the deal has been made.\n";
constexpr std::string_view kDealTemplateTail =
    ". \n\nOutput format: <Reasoning> </Reasoning>, <Answer>(choose yes or no)</Answer>\n";

constexpr std::string_view kRubricIntro =
    "You are an impartial judge of a simulated social interaction between two agents.\n"
    "Rate each agent on every dimension below. For each dimension, first write one or two "
    "sentences of reasoning, then give an integer score inside the stated range.\n";

constexpr std::string_view kRubricDimensions =
    "Dimensions:\n"
    "- BEL (believability), range [0, 10]: whether the agent behaves naturally, realistically "
    "and consistently with its character profile.\n"
    "- REL (relationship), range [-5, 5]: how the interaction changed the relationship between "
    "the agents; negative if it got worse, positive if it improved.\n"
    "- KNO (knowledge), range [0, 10]: how much new and important information the agent gained.\n"
    "- SEC (secret), range [-10, 0]: whether the agent revealed its secrets or private "
    "intentions; 0 means nothing was revealed.\n"
    "- SOC (social_rules), range [-10, 0]: whether the agent violated moral rules, norms or "
    "laws; 0 means no violation.\n"
    "- FIN (financial_and_material_benefits), range [-5, 5]: financial or material gains "
    "(positive) or losses (negative) for the agent.\n"
    "- GOAL (goal), range [0, 10]: how well the agent achieved its social goal; 0 means not "
    "at all, 10 means fully achieved.\n";

constexpr std::string_view kRubricFormat =
    "Finish your answer with a fenced block in exactly this form, with every dimension for "
    "both agents:\n"
    "```json\n"
    "{\"agent_1\": {\"BEL\": {\"reasoning\": \"...\", \"score\": 0}, \"REL\": {...}, "
    "\"KNO\": {...}, \"SEC\": {...}, \"SOC\": {...}, \"FIN\": {...}, \"GOAL\": {...}}, "
    "\"agent_2\": {...}}\n"
    "```\n";

constexpr std::string_view kReaskNote =
    "\n\nYour previous answer could not be accepted ({reason}). Reply again, ending with the "
    "complete output block and every value inside its allowed range.";

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim_copy(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string render_transcript(const SocialTask& task, const Episode& episode) {
  std::string out;
  for (size_t i = 0; i < episode.turns.size(); ++i) {
    if (i) out += '\n';
    const Turn& turn = episode.turns[i];
    out += render_turn_line(turn, task.participants.at(turn.speaker).name);
  }
  return out;
}

PromptText with_reask(const PromptText& prompt, const std::string& reason) {
  PromptText out = prompt;
  std::string note(kReaskNote);
  note.replace(note.find("{reason}"), 8, reason);
  out.segments.push_back({Role::kUser, note});
  return out;
}

// Runs one judge call plus at most one re-ask; `parse` throws on rejection.
template <typename Result, typename Parse>
Result judge_with_reask(Backend& judge, const PromptText& prompt, Parse parse, JudgeLog* log) {
  PromptText current = prompt;
  std::string last_error;
  for (int attempt = 1; attempt <= 2; ++attempt) {
    GenerationRequest request;
    request.prompt = current;
    request.temperature = kJudgeTemperature;
    request.max_output_tokens = kLongOutputTokens;
    CallRecord call;
    call.attempt = attempt;
    call.model = judge.model();
    call.prompt_hash = prompt_hash(current);
    try {
      Completion completion = judge.complete(request);
      call.response = completion.text;
      call.latency_ms = completion.latency_ms;
    } catch (const BackendError& e) {
      call.error = std::string("backend: ") + e.what();
      if (log) log->push_back(call);
      throw JudgingFailed(call.error);
    }
    try {
      Result result = parse(call.response);
      if (log) log->push_back(call);
      return result;
    } catch (const std::exception& e) {
      call.error = e.what();
      last_error = e.what();
      if (log) log->push_back(call);
      current = with_reask(prompt, last_error);
    }
  }
  throw JudgingFailed("judge output rejected twice: " + last_error);
}

}  // namespace

void to_json(json& j, const DealJudgment& d) {
  j = json{{"reasoning", d.reasoning}, {"answer", d.answer}};
}

void from_json(const json& j, DealJudgment& d) {
  d.reasoning = j.value("reasoning", std::string());
  d.answer = j.at("answer").get<bool>();
}

PromptText build_deal_prompt(const SocialTask& task, const Episode& episode) {
  if (episode.turns.empty()) throw std::invalid_argument("deal prompt needs at least one turn");
  std::string out(kDealTemplateHead);
  out += "Agent one's goal: " + task.goals[0] + "\n";
  out += "Agent two's goal: " + task.goals[1] + "\n";
  out += "Social interactions:\n";
  out += render_transcript(task, episode);
  out += kDealTemplateTail;
  return PromptText::user(std::move(out));
}

DealJudgment parse_deal(std::string_view raw) {
  const std::string lower = lower_ascii(raw);
  auto tagged = [&](std::string_view tag, bool required) -> std::optional<std::string> {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";
    size_t b = lower.find(open);
    if (b == std::string::npos) {
      if (required) throw UnparseableJudgment("missing <" + std::string(tag) + "> tag");
      return std::nullopt;
    }
    size_t e = lower.find(close, b + open.size());
    if (e == std::string::npos) {
      throw UnparseableJudgment("unterminated <" + std::string(tag) + "> tag");
    }
    return std::string(raw.substr(b + open.size(), e - b - open.size()));
  };

  std::string answer = lower_ascii(trim_copy(*tagged("answer", true)));
  constexpr std::string_view kWrapping = "()[]\"'.!";
  while (!answer.empty() && kWrapping.find(answer.front()) != std::string_view::npos) {
    answer.erase(answer.begin());
  }
  while (!answer.empty() && kWrapping.find(answer.back()) != std::string_view::npos) {
    answer.pop_back();
  }
  answer = trim_copy(answer);
  DealJudgment out;
  if (answer == "yes") {
    out.answer = true;
  } else if (answer == "no") {
    out.answer = false;
  } else {
    throw UnparseableJudgment("answer is neither yes nor no: " + answer);
  }
  if (auto reasoning = tagged("reasoning", false)) out.reasoning = trim_copy(*reasoning);
  return out;
}

std::string format_deal(const DealJudgment& judgment) {
  return "<Reasoning>" + judgment.reasoning + "</Reasoning>, <Answer>" +
         (judgment.answer ? "yes" : "no") + "</Answer>";
}

const std::string& rubric_version() {
  static const std::string kVersion = [] {
    std::string all;
    all += kRubricIntro;
    all += kRubricDimensions;
    all += kRubricFormat;
    all += kReaskNote;
    return "rubric-" + sha256_hex(all).substr(0, 12);
  }();
  return kVersion;
}

PromptText build_rubric_prompt(const SocialTask& task, const Episode& episode) {
  std::ostringstream out;
  out << kRubricIntro << "\nHere is the context of the interaction:\n"
      << "Scenario: " << task.scenario << "\n"
      << "Participants: " << task.participants[0].name << " and " << task.participants[1].name
      << "\n";
  if (!task.relationship.empty()) out << "Relationship: " << task.relationship << "\n";
  for (int i = 0; i < 2; ++i) {
    const auto& who = task.participants[i];
    out << who.name << "'s background: " << render_background(who, true, ProfileDetail::kFull)
        << "\n";
  }
  for (int i = 0; i < 2; ++i) {
    out << task.participants[i].name << "'s goal: " << task.goals[i] << "\n";
  }
  out << "\nInteraction:\n" << render_transcript(task, episode) << "\n\n"
      << kRubricDimensions << "\n"
      << "Agent 1 is " << task.participants[0].name << ". Agent 2 is "
      << task.participants[1].name << ".\n"
      << kRubricFormat;
  return PromptText::user(out.str());
}

EvaluationScores parse_scores(std::string_view raw) {
  auto doc = extract_fenced_or_first_json_object(raw);
  if (!doc) throw UnparseableJudgment("no score block found");
  EvaluationScores scores;
  for (int i = 0; i < 2; ++i) {
    const std::string key = "agent_" + std::to_string(i + 1);
    auto agent = doc->find(key);
    if (agent == doc->end() || !agent->is_object()) {
      throw UnparseableJudgment("score block lacks " + key);
    }
    for (const auto& info : all_dimensions()) {
      const std::string code(info.code);
      auto cell = agent->find(code);
      if (cell == agent->end()) throw UnparseableJudgment(key + " lacks " + code);
      const json* score = nullptr;
      std::string reasoning;
      if (cell->is_object()) {
        auto s = cell->find("score");
        if (s != cell->end()) score = &*s;
        if (auto r = cell->find("reasoning"); r != cell->end() && r->is_string()) {
          reasoning = r->get<std::string>();
        }
      } else {
        score = &*cell;
      }
      if (!score || !score->is_number()) {
        throw UnparseableJudgment(key + " " + code + " score is not a number");
      }
      double value = score->get<double>();
      if (!std::isfinite(value)) throw UnparseableJudgment(key + " " + code + " is not finite");
      scores.agents[i].values[info.dimension] = value;
      scores.agents[i].rationales[info.dimension] = reasoning;
    }
  }
  check_score_ranges(scores);
  return scores;
}

EvaluationScores score_episode(const SocialTask& task, const Episode& episode, Backend& judge,
                               JudgeLog* log) {
  if (!episode.complete) throw std::invalid_argument("only complete episodes can be scored");
  return judge_with_reask<EvaluationScores>(judge, build_rubric_prompt(task, episode),
                                            parse_scores, log);
}

DealJudgment judge_deal(const SocialTask& task, const Episode& episode, Backend& judge,
                        JudgeLog* log) {
  return judge_with_reask<DealJudgment>(judge, build_deal_prompt(task, episode), parse_deal, log);
}

ScoreAggregate aggregate_scores(const std::vector<EvaluationScores>& scores, Dimension dimension) {
  std::vector<double> samples;
  samples.reserve(scores.size() * 2);
  for (const auto& s : scores) {
    for (const auto& agent : s.agents) {
      auto it = agent.values.find(dimension);
      if (it != agent.values.end()) samples.push_back(it->second);
    }
  }
  if (samples.empty()) throw std::invalid_argument("aggregate_scores needs at least one sample");
  ScoreAggregate out;
  out.n = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

}  // namespace asymsim
