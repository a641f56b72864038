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

// Batch orchestration: run manifests, resumable simulation runs, cached
// judging, cross-run comparison reports and the finetune/annotation
// exports. Layout: <out>/<run-id>/{manifest.json, episodes/, scores/, reports/}.

#ifndef ASYMSIM_RUN_HPP_
#define ASYMSIM_RUN_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asymsim/analysis.hpp"
#include "asymsim/annotation.hpp"
#include "asymsim/backend.hpp"
#include "asymsim/domain.hpp"
#include "asymsim/engine.hpp"
#include "asymsim/evaluator.hpp"
#include "asymsim/finetune.hpp"
#include "asymsim/prompt.hpp"

namespace asymsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpisodeStatus {
  std::string id;
  std::string task_id;
  int task_index = 0;
  int replicate = 0;
  std::string status;  // complete | aborted | failed
  std::string error;
  int turns = 0;

  bool operator==(const EpisodeStatus&) const = default;
};

struct RunManifest {
  std::string run_id;
  SimulationMode mode = SimulationMode::kAgents;
  std::string profile;
  std::string model;
  std::string task_file;
  std::string task_file_hash;
  int episodes_per_task = 5;
  EngineConfig engine;
  VisibilityPolicy policy;
  uint64_t seed = 0;
  std::string rubric_version;
  std::string judge_model;
  std::string started_at;
  std::string finished_at;
  bool annotations_imported = false;
  std::string artifact_version;
  std::vector<EpisodeStatus> episodes;
};

void to_json(json& j, const EpisodeStatus& s);
void from_json(const json& j, EpisodeStatus& s);
void to_json(json& j, const RunManifest& m);
void from_json(const json& j, RunManifest& m);

RunManifest load_manifest(const std::string& run_dir);
void save_manifest(const std::string& run_dir, const RunManifest& manifest);

std::string episode_path(const std::string& run_dir, const std::string& episode_id);
std::string score_path(const std::string& run_dir, const std::string& episode_id);

struct SimulateOptions {
  SimulationMode mode = SimulationMode::kAgents;
  std::string tasks_path;
  BackendProfile profile;
  int episodes_per_task = 5;
  EngineConfig engine;
  VisibilityPolicy policy = VisibilityPolicy::agents_default();
  int concurrency = 1;
  std::string out_dir = "out";
  uint64_t seed = 0;
};

struct SimulateResult {
  RunManifest manifest;
  std::string run_dir;
  size_t executed = 0;
  size_t skipped = 0;  // already complete from an earlier invocation
  size_t failed = 0;
};

// Content hash over everything that determines the episodes.
std::string compute_run_id(const SimulateOptions& options, const std::string& task_file_hash);

SimulateResult simulate(const SimulateOptions& options, std::shared_ptr<Clock> clock,
                        std::shared_ptr<HttpTransport> transport = nullptr);

struct ScoreFile {
  std::string episode_id;
  std::string judge_model;
  std::string rubric_version;
  std::string status;  // ok | failed
  std::string error;
  std::optional<EvaluationScores> scores;
  std::optional<DealJudgment> deal;
  std::vector<CallRecord> calls;
};

void to_json(json& j, const ScoreFile& s);
void from_json(const json& j, ScoreFile& s);

enum class DealPolicy { kTagged, kAll, kNever };

struct EvaluateOptions {
  std::string run_dir;
  BackendProfile judge;
  DealPolicy deal = DealPolicy::kTagged;  // kTagged: tasks tagged "craigslist"
  int concurrency = 1;
  bool retry_failed = false;
};

struct EvaluateResult {
  size_t scored = 0;
  size_t cached = 0;
  size_t failed = 0;
  size_t skipped_incomplete = 0;
};

EvaluateResult evaluate(const EvaluateOptions& options, std::shared_ptr<Clock> clock,
                        std::shared_ptr<HttpTransport> transport = nullptr);

struct RunData {
  std::string dir;
  std::string label;
  RunManifest manifest;
  std::vector<Episode> episodes;  // manifest order
  std::map<std::string, ScoreFile> scores;
};

RunData load_run(const std::string& run_dir);

struct SampleSummary {
  size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;
};

struct RunMetrics {
  std::string label;
  std::string run_id;
  SimulationMode mode = SimulationMode::kAgents;
  size_t episodes = 0;
  size_t complete = 0;
  std::map<Dimension, SampleSummary> dimensions;
  SampleSummary verbosity;
  SampleSummary first_mention;
  size_t first_mention_absent = 0;
  std::array<size_t, kHistogramBins> first_mention_bins{};
  std::optional<double> deal_rate;
  size_t deal_n = 0;
};

struct PairwiseTest {
  std::string metric;
  std::string left;
  std::string right;
  TTestResult result;
};

struct ComparisonReport {
  std::vector<RunMetrics> runs;
  std::vector<PairwiseTest> tests;
  std::optional<NaturalnessResult> naturalness;
};

RunMetrics compute_run_metrics(const RunData& run, VerbosityOptions verbosity_options = {});

struct AnalyzeOptions {
  std::vector<std::string> run_dirs;
  std::string out_dir;  // defaults to <first run>/reports
  std::string annotations_path;
  std::string labels_path;
  VerbosityOptions verbosity;
};

ComparisonReport analyze(const AnalyzeOptions& options);
std::string render_report_markdown(const ComparisonReport& report);
json report_to_json(const ComparisonReport& report);

// Assigns distinct labels (the mode, or mode@run-id when modes repeat).
void assign_labels(std::vector<RunData>& runs);

ExportManifest export_run_finetune(const std::string& run_dir, const std::string& path,
                                   SpeakerFilter speakers = SpeakerFilter::kBoth);

// Writes <out_dir>/pairs.jsonl and <out_dir>/labels.json.
BlindedExport export_run_pairs(const std::string& left_dir, const std::string& right_dir,
                               const std::string& out_dir, uint64_t seed, size_t max_pairs = 0);

// Marks humans-in-the-loop on each run's manifest.
void mark_annotations_imported(const std::vector<std::string>& run_dirs);

}  // namespace asymsim

#endif  // ASYMSIM_RUN_HPP_
