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

#include "asymsim/run.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "asymsim/hashing.hpp"
#include "asymsim/script.hpp"

namespace fs = std::filesystem;

namespace asymsim {

namespace {

std::string sanitize_id(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "task" : out;
}

size_t select_variant(uint64_t seed, const std::string& episode_id, size_t variants) {
  if (variants <= 1) return 0;
  std::string digest = sha256_hex(std::to_string(seed) + ":" + episode_id);
  return static_cast<size_t>(std::stoull(digest.substr(0, 15), nullptr, 16) % variants);
}

// Runs fn(i) for i in [0, n) on up to `concurrency` threads.
template <typename Fn>
void parallel_for(size_t n, int concurrency, Fn fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, concurrency)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

// Single writer for everything a simulation run puts on disk.
class RunJournal : public EpisodeObserver {
 public:
  explicit RunJournal(std::string run_dir) : run_dir_(std::move(run_dir)) {}

  void begin(const std::string& episode_id) {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream(journal_path(episode_id), std::ios::trunc);
  }

  void on_call(const Episode& episode, const CallRecord& call) override {
    append(episode.id, json{{"type", "call"}, {"call", call}});
  }

  void on_turn(const Episode& episode, const Turn& turn) override {
    append(episode.id, json{{"type", "turn"}, {"turn", turn}});
  }

  void finish(const Episode& episode, RunManifest& manifest, size_t slot, EpisodeStatus status) {
    std::lock_guard<std::mutex> lock(mu_);
    write_file(episode_path(run_dir_, episode.id), pretty(json(episode)));
    manifest.episodes[slot] = std::move(status);
    save_manifest(run_dir_, manifest);
  }

 private:
  std::string journal_path(const std::string& id) const {
    return (fs::path(run_dir_) / "episodes" / (id + ".journal.jsonl")).string();
  }

  void append(const std::string& id, const json& entry) {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(journal_path(id), std::ios::app | std::ios::binary);
    out << entry.dump() << '\n';
  }

  std::string run_dir_;
  std::mutex mu_;
};

std::string fixture_hash(const BackendProfile& profile) {
  if (profile.kind != "fixture") return {};
  return sha256_hex(read_file(profile.fixture_path));
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string fmt_p(double p) {
  std::ostringstream out;
  if (p < 1e-4) {
    out << std::scientific << std::setprecision(2) << p;
  } else {
    out << std::fixed << std::setprecision(4) << p;
  }
  return out.str();
}

SampleSummary summarize(std::vector<double> samples) {
  SampleSummary s;
  s.n = samples.size();
  if (s.n > 0) s.mean = mean(samples);
  if (s.n > 1) s.stddev = std::sqrt(sample_variance(samples));
  s.samples = std::move(samples);
  return s;
}

json summary_json(const SampleSummary& s) {
  return json{{"n", s.n}, {"mean", s.mean}, {"stddev", s.stddev}};
}

}  // namespace

// --- manifest -----------------------------------------------------------------

void to_json(json& j, const EpisodeStatus& s) {
  j = json{{"id", s.id},           {"task_id", s.task_id}, {"task_index", s.task_index},
           {"replicate", s.replicate}, {"status", s.status},   {"error", s.error},
           {"turns", s.turns}};
}

void from_json(const json& j, EpisodeStatus& s) {
  s.id = j.at("id").get<std::string>();
  s.task_id = j.value("task_id", std::string());
  s.task_index = j.value("task_index", 0);
  s.replicate = j.value("replicate", 0);
  s.status = j.value("status", std::string());
  s.error = j.value("error", std::string());
  s.turns = j.value("turns", 0);
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"run_id", m.run_id},
           {"mode", std::string(to_string(m.mode))},
           {"profile", m.profile},
           {"model", m.model},
           {"task_file", m.task_file},
           {"task_file_hash", m.task_file_hash},
           {"episodes_per_task", m.episodes_per_task},
           {"engine", m.engine},
           {"policy", m.policy},
           {"seed", m.seed},
           {"rubric_version", m.rubric_version},
           {"judge_model", m.judge_model},
           {"started_at", m.started_at},
           {"finished_at", m.finished_at},
           {"annotations_imported", m.annotations_imported},
           {"artifact_version", m.artifact_version},
           {"episodes", m.episodes}};
}

void from_json(const json& j, RunManifest& m) {
  m.run_id = j.at("run_id").get<std::string>();
  m.mode = mode_from_string(j.at("mode").get<std::string>());
  m.profile = j.value("profile", std::string());
  m.model = j.value("model", std::string());
  m.task_file = j.value("task_file", std::string());
  m.task_file_hash = j.value("task_file_hash", std::string());
  m.episodes_per_task = j.value("episodes_per_task", 5);
  m.engine = j.value("engine", EngineConfig{});
  m.policy = j.contains("policy") ? j.at("policy").get<VisibilityPolicy>()
                                  : VisibilityPolicy::for_mode(m.mode);
  m.seed = j.value("seed", uint64_t{0});
  m.rubric_version = j.value("rubric_version", std::string());
  m.judge_model = j.value("judge_model", std::string());
  m.started_at = j.value("started_at", std::string());
  m.finished_at = j.value("finished_at", std::string());
  m.annotations_imported = j.value("annotations_imported", false);
  m.artifact_version = j.value("artifact_version", std::string());
  m.episodes = j.value("episodes", std::vector<EpisodeStatus>{});
}

RunManifest load_manifest(const std::string& run_dir) {
  return json::parse(read_file((fs::path(run_dir) / "manifest.json").string())).get<RunManifest>();
}

void save_manifest(const std::string& run_dir, const RunManifest& manifest) {
  const fs::path target = fs::path(run_dir) / "manifest.json";
  const fs::path tmp = fs::path(run_dir) / "manifest.json.tmp";
  write_file(tmp.string(), pretty(json(manifest)));
  fs::rename(tmp, target);
}

std::string episode_path(const std::string& run_dir, const std::string& episode_id) {
  return (fs::path(run_dir) / "episodes" / (episode_id + ".json")).string();
}

std::string score_path(const std::string& run_dir, const std::string& episode_id) {
  return (fs::path(run_dir) / "scores" / (episode_id + ".json")).string();
}

// --- simulate -----------------------------------------------------------------

std::string compute_run_id(const SimulateOptions& options, const std::string& task_file_hash) {
  json key{{"mode", std::string(to_string(options.mode))},
           {"tasks", task_file_hash},
           {"profile", {{"kind", options.profile.kind},
                        {"model", options.profile.model},
                        {"endpoint", options.profile.endpoint},
                        {"fixture", fixture_hash(options.profile)}}},
           {"episodes_per_task", options.episodes_per_task},
           {"engine", options.engine},
           {"policy", options.policy},
           {"seed", options.seed}};
  return sha256_hex(key.dump()).substr(0, 12);
}

SimulateResult simulate(const SimulateOptions& options, std::shared_ptr<Clock> clock,
                        std::shared_ptr<HttpTransport> transport) {
  if (options.episodes_per_task < 1) throw ConfigError("episodes-per-task must be >= 1");
  try {
    options.engine.validate();
    options.profile.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<SocialTask> tasks;
  std::string task_bytes;
  try {
    task_bytes = read_file(options.tasks_path);
    tasks = load_tasks(options.tasks_path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot load tasks: " + std::string(e.what()));
  }
  for (const auto& task : tasks) {
    auto violations = validate_task(task);
    if (!violations.empty()) throw ConfigError("task " + task.id + ": " + violations.front());
  }

  BackendFactory factory = [&] {
    try {
      return BackendFactory(options.profile, clock, transport);
    } catch (const std::exception& e) {
      throw ConfigError("profile " + options.profile.name + ": " + e.what());
    }
  }();

  SimulateResult result;
  const std::string task_hash = sha256_hex(task_bytes);
  RunManifest& manifest = result.manifest;
  manifest.run_id = compute_run_id(options, task_hash);
  result.run_dir = (fs::path(options.out_dir) / manifest.run_id).string();
  fs::create_directories(fs::path(result.run_dir) / "episodes");
  fs::create_directories(fs::path(result.run_dir) / "scores");
  fs::create_directories(fs::path(result.run_dir) / "reports");

  std::map<std::string, EpisodeStatus> previous;
  std::optional<RunManifest> existing;
  if (fs::exists(fs::path(result.run_dir) / "manifest.json")) {
    existing = load_manifest(result.run_dir);
    for (const auto& s : existing->episodes) previous[s.id] = s;
  }

  manifest.mode = options.mode;
  manifest.profile = options.profile.name;
  manifest.model = factory.profile().model;
  manifest.task_file = options.tasks_path;
  manifest.task_file_hash = task_hash;
  manifest.episodes_per_task = options.episodes_per_task;
  manifest.engine = options.engine;
  manifest.policy = options.policy;
  manifest.seed = options.seed;
  manifest.artifact_version = ASYMSIM_VERSION;
  if (existing) {
    manifest.rubric_version = existing->rubric_version;
    manifest.judge_model = existing->judge_model;
    manifest.annotations_imported = existing->annotations_imported;
  }
  manifest.started_at =
      existing && !existing->started_at.empty() ? existing->started_at
                                                : format_timestamp(clock->now_ms());

  struct Job {
    size_t slot;
    const SocialTask* task;
    int task_index;
    int replicate;
    std::string id;
  };
  std::vector<Job> jobs;
  for (size_t t = 0; t < tasks.size(); ++t) {
    for (int k = 0; k < options.episodes_per_task; ++k) {
      std::string id = sanitize_id(tasks[t].id) + "-" + std::to_string(k);
      EpisodeStatus status{id, tasks[t].id, static_cast<int>(t), k, "pending", "", 0};
      auto prev = previous.find(id);
      if (prev != previous.end() && prev->second.status == "complete" &&
          fs::exists(episode_path(result.run_dir, id))) {
        manifest.episodes.push_back(prev->second);
        ++result.skipped;
        continue;
      }
      manifest.episodes.push_back(status);
      jobs.push_back({manifest.episodes.size() - 1, &tasks[t], static_cast<int>(t), k, id});
    }
  }
  // Pending entries are not persisted until their episode file exists.
  {
    RunManifest snapshot = manifest;
    std::erase_if(snapshot.episodes, [](const auto& s) { return s.status == "pending"; });
    save_manifest(result.run_dir, snapshot);
  }

  RunJournal journal(result.run_dir);
  std::atomic<size_t> failed{0};
  parallel_for(jobs.size(), options.concurrency, [&](size_t j) {
    const Job& job = jobs[j];
    journal.begin(job.id);
    EpisodeContext context{job.id, clock.get(), &journal};
    const size_t variant = select_variant(options.seed, job.id, factory.variant_count());
    Episode episode;
    EpisodeStatus status = manifest.episodes[job.slot];
    try {
      if (options.mode == SimulationMode::kScript) {
        auto backend = factory.make(variant, 0);
        episode = run_script_episode(*job.task, *backend, options.engine, context);
      } else {
        auto first = factory.make(variant, 0);
        auto second = factory.make(variant, 1);
        episode = run_interactive_episode(*job.task, options.mode, {first.get(), second.get()},
                                          options.policy, options.engine, context);
      }
      status.status = "complete";
    } catch (const EpisodeAborted& e) {
      episode = e.partial();
      status.status = "aborted";
      status.error = e.what();
    } catch (const EmptyScript& e) {
      episode = e.partial();
      status.status = "failed";
      status.error = e.what();
    } catch (const std::exception& e) {
      episode = Episode{};
      episode.id = job.id;
      episode.task = *job.task;
      episode.mode = options.mode;
      episode.provenance.abort_reason = e.what();
      status.status = "failed";
      status.error = e.what();
    }
    status.turns = static_cast<int>(episode.turns.size());
    if (status.status != "complete") ++failed;
    journal.finish(episode, manifest, job.slot, std::move(status));
  });

  result.executed = jobs.size();
  result.failed = failed.load();
  manifest.finished_at = format_timestamp(clock->now_ms());
  save_manifest(result.run_dir, manifest);
  return result;
}

// --- evaluate -----------------------------------------------------------------

void to_json(json& j, const ScoreFile& s) {
  j = json{{"episode_id", s.episode_id},
           {"judge_model", s.judge_model},
           {"rubric_version", s.rubric_version},
           {"status", s.status},
           {"error", s.error},
           {"scores", s.scores ? json(*s.scores) : json(nullptr)},
           {"deal", s.deal ? json(*s.deal) : json(nullptr)},
           {"calls", s.calls}};
}

void from_json(const json& j, ScoreFile& s) {
  s.episode_id = j.at("episode_id").get<std::string>();
  s.judge_model = j.value("judge_model", std::string());
  s.rubric_version = j.value("rubric_version", std::string());
  s.status = j.value("status", std::string());
  s.error = j.value("error", std::string());
  s.scores.reset();
  s.deal.reset();
  if (auto it = j.find("scores"); it != j.end() && !it->is_null()) {
    s.scores = it->get<EvaluationScores>();
  }
  if (auto it = j.find("deal"); it != j.end() && !it->is_null()) s.deal = it->get<DealJudgment>();
  s.calls = j.value("calls", std::vector<CallRecord>{});
}

EvaluateResult evaluate(const EvaluateOptions& options, std::shared_ptr<Clock> clock,
                        std::shared_ptr<HttpTransport> transport) {
  RunManifest manifest;
  try {
    manifest = load_manifest(options.run_dir);
  } catch (const std::exception& e) {
    throw ConfigError("cannot load run " + options.run_dir + ": " + e.what());
  }
  BackendFactory factory = [&] {
    try {
      return BackendFactory(options.judge, clock, transport);
    } catch (const std::exception& e) {
      throw ConfigError("profile " + options.judge.name + ": " + e.what());
    }
  }();
  const std::string judge_model = factory.profile().model;
  fs::create_directories(fs::path(options.run_dir) / "scores");

  EvaluateResult result;
  std::mutex mu;
  parallel_for(manifest.episodes.size(), options.concurrency, [&](size_t i) {
    const EpisodeStatus& status = manifest.episodes[i];
    const std::string path = score_path(options.run_dir, status.id);
    if (fs::exists(path)) {
      ScoreFile cached = json::parse(read_file(path)).get<ScoreFile>();
      bool same_key = cached.judge_model == judge_model &&
                      cached.rubric_version == rubric_version();
      if (same_key && (cached.status == "ok" || !options.retry_failed)) {
        std::lock_guard<std::mutex> lock(mu);
        ++result.cached;
        return;
      }
    }
    Episode episode =
        json::parse(read_file(episode_path(options.run_dir, status.id))).get<Episode>();
    if (!episode.complete) {
      std::lock_guard<std::mutex> lock(mu);
      ++result.skipped_incomplete;
      return;
    }
    ScoreFile file;
    file.episode_id = episode.id;
    file.judge_model = judge_model;
    file.rubric_version = rubric_version();
    const size_t variant = select_variant(manifest.seed, episode.id, factory.variant_count());
    auto judge = factory.make(variant, 0);
    try {
      file.scores = score_episode(episode.task, episode, *judge, &file.calls);
      file.status = "ok";
    } catch (const std::exception& e) {
      file.status = "failed";
      file.error = e.what();
    }
    bool want_deal = options.deal == DealPolicy::kAll ||
                     (options.deal == DealPolicy::kTagged && episode.task.has_tag("craigslist"));
    if (want_deal && !episode.turns.empty()) {
      try {
        file.deal = judge_deal(episode.task, episode, *judge, &file.calls);
      } catch (const std::exception& e) {
        file.error += (file.error.empty() ? "" : "; ") + std::string("deal: ") + e.what();
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    write_file(path, pretty(json(file)));
    if (file.status == "ok") {
      ++result.scored;
    } else {
      ++result.failed;
    }
  });

  manifest.rubric_version = rubric_version();
  manifest.judge_model = judge_model;
  save_manifest(options.run_dir, manifest);
  return result;
}

// --- analyze ------------------------------------------------------------------

RunData load_run(const std::string& run_dir) {
  RunData run;
  run.dir = run_dir;
  try {
    run.manifest = load_manifest(run_dir);
  } catch (const std::exception& e) {
    throw ConfigError("cannot load run " + run_dir + ": " + e.what());
  }
  run.label = std::string(to_string(run.manifest.mode));
  for (const auto& status : run.manifest.episodes) {
    const std::string path = episode_path(run_dir, status.id);
    if (!fs::exists(path)) continue;
    run.episodes.push_back(json::parse(read_file(path)).get<Episode>());
    const std::string scores = score_path(run_dir, status.id);
    if (fs::exists(scores)) {
      run.scores.emplace(status.id, json::parse(read_file(scores)).get<ScoreFile>());
    }
  }
  return run;
}

void assign_labels(std::vector<RunData>& runs) {
  std::map<std::string, int> seen;
  for (const auto& r : runs) seen[std::string(to_string(r.manifest.mode))]++;
  for (auto& r : runs) {
    std::string mode(to_string(r.manifest.mode));
    r.label = seen[mode] > 1 ? mode + "@" + r.manifest.run_id : mode;
  }
}

RunMetrics compute_run_metrics(const RunData& run, VerbosityOptions verbosity_options) {
  RunMetrics m;
  m.label = run.label;
  m.run_id = run.manifest.run_id;
  m.mode = run.manifest.mode;
  m.episodes = run.episodes.size();
  std::map<Dimension, std::vector<double>> dims;
  std::vector<double> verbosities, mentions;
  std::vector<DealJudgment> deals;
  for (const auto& episode : run.episodes) {
    if (!episode.complete) continue;
    ++m.complete;
    if (auto it = run.scores.find(episode.id); it != run.scores.end()) {
      const ScoreFile& file = it->second;
      if (file.status == "ok" && file.scores) {
        for (const auto& agent : file.scores->agents) {
          for (const auto& [dim, value] : agent.values) dims[dim].push_back(value);
        }
      }
      if (file.deal) deals.push_back(*file.deal);
    }
    try {
      verbosities.push_back(verbosity(episode, verbosity_options));
    } catch (const NoCountedTurns&) {
    }
    if (!episode.turns.empty()) {
      if (auto target = mutual_friend_target(episode.task)) {
        if (auto pos = first_mention_position(episode, *target)) {
          mentions.push_back(*pos);
        } else {
          ++m.first_mention_absent;
        }
      }
    }
  }
  for (auto& [dim, values] : dims) m.dimensions[dim] = summarize(std::move(values));
  m.first_mention_bins = first_mention_histogram(mentions);
  m.verbosity = summarize(std::move(verbosities));
  m.first_mention = summarize(std::move(mentions));
  if (!deals.empty()) {
    m.deal_rate = deal_rate(deals);
    m.deal_n = deals.size();
  }
  return m;
}

ComparisonReport analyze(const AnalyzeOptions& options) {
  if (options.run_dirs.empty()) throw ConfigError("analyze needs at least one run directory");
  std::vector<RunData> runs;
  for (const auto& dir : options.run_dirs) runs.push_back(load_run(dir));
  assign_labels(runs);

  ComparisonReport report;
  for (const auto& run : runs) report.runs.push_back(compute_run_metrics(run, options.verbosity));

  auto add_test = [&](const std::string& metric, const RunMetrics& a, const RunMetrics& b,
                      const SampleSummary& sa, const SampleSummary& sb) {
    if (sa.n < 2 || sb.n < 2) return;
    report.tests.push_back({metric, a.label, b.label, welch_t_test(sa.samples, sb.samples)});
  };
  for (size_t i = 0; i < report.runs.size(); ++i) {
    for (size_t j = i + 1; j < report.runs.size(); ++j) {
      const auto& a = report.runs[i];
      const auto& b = report.runs[j];
      auto ga = a.dimensions.find(Dimension::kGoal);
      auto gb = b.dimensions.find(Dimension::kGoal);
      if (ga != a.dimensions.end() && gb != b.dimensions.end()) {
        add_test("GOAL", a, b, ga->second, gb->second);
      }
      add_test("verbosity", a, b, a.verbosity, b.verbosity);
      add_test("first_mention", a, b, a.first_mention, b.first_mention);
    }
  }

  if (!options.annotations_path.empty()) {
    if (options.labels_path.empty()) throw ConfigError("--annotations needs --labels");
    auto choices = choices_from_jsonl(read_file(options.annotations_path));
    auto labeling = labeling_from_json(json::parse(read_file(options.labels_path)));
    report.naturalness = naturalness_win_rate(choices, labeling);
    mark_annotations_imported(options.run_dirs);
  }

  const std::string out_dir =
      options.out_dir.empty() ? (fs::path(options.run_dirs.front()) / "reports").string()
                              : options.out_dir;
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "comparison.md").string(), render_report_markdown(report));
  write_file((fs::path(out_dir) / "comparison.json").string(), pretty(report_to_json(report)));
  for (const auto& m : report.runs) {
    write_file((fs::path(out_dir) / ("first_mention_" + sanitize_id(m.label) + ".csv")).string(),
               histogram_csv(m.first_mention_bins));
  }
  return report;
}

std::string render_report_markdown(const ComparisonReport& report) {
  std::ostringstream out;
  out << "# Simulation comparison\n\n";
  out << "| run | mode | episodes | complete | GOAL mean (sd, n) | verbosity mean (sd, n) | "
         "first mention mean (n, absent) | deal rate (n) |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& m : report.runs) {
    out << "| " << m.label << " | " << to_string(m.mode) << " | " << m.episodes << " | "
        << m.complete << " | ";
    if (auto g = m.dimensions.find(Dimension::kGoal); g != m.dimensions.end()) {
      out << fmt(g->second.mean, 2) << " (" << fmt(g->second.stddev, 2) << ", " << g->second.n
          << ")";
    } else {
      out << "-";
    }
    out << " | " << fmt(m.verbosity.mean, 2) << " (" << fmt(m.verbosity.stddev, 2) << ", "
        << m.verbosity.n << ") | ";
    out << fmt(m.first_mention.mean, 2) << " (" << m.first_mention.n << ", "
        << m.first_mention_absent << ") | ";
    if (m.deal_rate) {
      out << fmt(*m.deal_rate, 2) << " (" << m.deal_n << ")";
    } else {
      out << "-";
    }
    out << " |\n";
  }

  bool any_dims = false;
  for (const auto& m : report.runs) any_dims = any_dims || !m.dimensions.empty();
  if (any_dims) {
    out << "\n## Judge dimensions (mean)\n\n| run |";
    for (const auto& info : all_dimensions()) out << " " << info.code << " |";
    out << "\n|---|";
    for (size_t i = 0; i < all_dimensions().size(); ++i) out << "---|";
    out << "\n";
    for (const auto& m : report.runs) {
      out << "| " << m.label << " |";
      for (const auto& info : all_dimensions()) {
        auto it = m.dimensions.find(info.dimension);
        out << " " << (it == m.dimensions.end() ? "-" : fmt(it->second.mean, 2)) << " |";
      }
      out << "\n";
    }
  }

  if (!report.tests.empty()) {
    out << "\n## Pairwise Welch t-tests\n\n* marks p < 0.001.\n\n"
        << "| metric | left | right | t | df | p | |\n|---|---|---|---|---|---|---|\n";
    for (const auto& t : report.tests) {
      out << "| " << t.metric << " | " << t.left << " | " << t.right << " | "
          << fmt(t.result.t, 3) << " | " << fmt(t.result.df, 2) << " | "
          << fmt_p(t.result.p_two_sided) << " | " << significance_star(t.result.p_two_sided)
          << " |\n";
    }
  }

  if (report.naturalness) {
    const auto& n = *report.naturalness;
    out << "\n## Naturalness (blinded pairwise)\n\n| label | win rate |\n|---|---|\n";
    for (const auto& [label, rate] : n.win_rate) {
      out << "| " << label << " | " << fmt(rate) << " |\n";
    }
    out << "\nOne-sample t-test of " << n.focus << " wins vs 0.5 over " << n.n
        << " choices: t = " << fmt(n.test.t, 3) << ", p = " << fmt_p(n.test.p_two_sided) << " "
        << significance_star(n.test.p_two_sided) << "\n";
  }
  return out.str();
}

json report_to_json(const ComparisonReport& report) {
  json runs = json::array();
  for (const auto& m : report.runs) {
    json dims = json::object();
    for (const auto& [dim, s] : m.dimensions) {
      dims[std::string(dimension_info(dim).code)] = summary_json(s);
    }
    runs.push_back({{"label", m.label},
                    {"run_id", m.run_id},
                    {"mode", std::string(to_string(m.mode))},
                    {"episodes", m.episodes},
                    {"complete", m.complete},
                    {"dimensions", dims},
                    {"verbosity", summary_json(m.verbosity)},
                    {"first_mention", summary_json(m.first_mention)},
                    {"first_mention_absent", m.first_mention_absent},
                    {"first_mention_histogram", m.first_mention_bins},
                    {"deal_rate", m.deal_rate ? json(*m.deal_rate) : json(nullptr)},
                    {"deal_n", m.deal_n}});
  }
  json tests = json::array();
  for (const auto& t : report.tests) {
    tests.push_back({{"metric", t.metric},
                     {"left", t.left},
                     {"right", t.right},
                     {"result", t.result},
                     {"significant", t.result.p_two_sided < 0.001}});
  }
  json out{{"runs", runs}, {"pairwise_tests", tests}};
  if (report.naturalness) {
    out["naturalness"] = {{"win_rate", report.naturalness->win_rate},
                          {"focus", report.naturalness->focus},
                          {"n", report.naturalness->n},
                          {"test", report.naturalness->test},
                          {"significant", report.naturalness->test.p_two_sided < 0.001}};
  }
  return out;
}

// --- exports --------------------------------------------------------------------

ExportManifest export_run_finetune(const std::string& run_dir, const std::string& path,
                                   SpeakerFilter speakers) {
  RunData run = load_run(run_dir);
  if (run.manifest.mode != SimulationMode::kScript) {
    throw ConfigError("finetune export needs a script-mode run; " + run_dir + " is " +
                      std::string(to_string(run.manifest.mode)));
  }
  std::map<std::string, EvaluationScores> evaluations;
  for (const auto& [id, file] : run.scores) {
    if (file.status == "ok" && file.scores) evaluations.emplace(id, *file.scores);
  }
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  return export_finetune(run.episodes, evaluations, path, speakers);
}

BlindedExport export_run_pairs(const std::string& left_dir, const std::string& right_dir,
                               const std::string& out_dir, uint64_t seed, size_t max_pairs) {
  std::vector<RunData> runs{load_run(left_dir), load_run(right_dir)};
  assign_labels(runs);
  BlindedExport exported = make_blinded_pairs(runs[0].episodes, runs[0].label, runs[1].episodes,
                                              runs[1].label, seed, max_pairs);
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "pairs.jsonl").string(), pairs_to_jsonl(exported.pairs));
  write_file((fs::path(out_dir) / "labels.json").string(),
             pretty(labeling_to_json(exported.labeling)));
  return exported;
}

void mark_annotations_imported(const std::vector<std::string>& run_dirs) {
  for (const auto& dir : run_dirs) {
    RunManifest m = load_manifest(dir);
    if (m.annotations_imported) continue;
    m.annotations_imported = true;
    save_manifest(dir, m);
  }
}

}  // namespace asymsim
