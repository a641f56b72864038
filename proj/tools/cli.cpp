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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "asymsim/card.hpp"
#include "asymsim/run.hpp"

namespace fs = std::filesystem;

namespace asymsim {

namespace {

struct ProfileArgs {
  std::string name;
  std::string profiles_path = "profiles.json";
};

// Accepts a profile name from the profiles file or "fixture:<path>".
BackendProfile resolve_profile(const ProfileArgs& args) {
  constexpr std::string_view kFixturePrefix = "fixture:";
  if (args.name.rfind(kFixturePrefix, 0) == 0) {
    BackendProfile p;
    p.name = args.name;
    p.kind = "fixture";
    p.fixture_path = args.name.substr(kFixturePrefix.size());
    return p;
  }
  if (args.name.empty()) throw ConfigError("--profile is required");
  std::map<std::string, BackendProfile> profiles;
  try {
    profiles = load_profiles(args.profiles_path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot load profiles from " + args.profiles_path + ": " + e.what());
  }
  auto it = profiles.find(args.name);
  if (it == profiles.end()) throw ConfigError("unknown profile " + args.name);
  BackendProfile p = it->second;
  p.name = args.name;
  if (p.kind == "fixture" && fs::path(p.fixture_path).is_relative()) {
    p.fixture_path = (fs::path(args.profiles_path).parent_path() / p.fixture_path).string();
  }
  return p;
}

std::shared_ptr<Clock> clock_for(const BackendProfile& profile) {
  if (profile.kind == "fixture") return std::make_shared<VirtualClock>(0);
  return std::make_shared<SystemClock>();
}

void add_profile_options(CLI::App* cmd, ProfileArgs& args, const std::string& flag) {
  cmd->add_option(flag, args.name, "Backend profile name, or fixture:<path>")->required();
  cmd->add_option("--profiles", args.profiles_path, "Profiles file")->capture_default_str();
}

const std::vector<std::string> kModeNames{"agents", "mindreaders", "script"};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const CliEnvironment& env) {
  CLI::App app{"Simulate and analyze dyadic LLM social interactions", "asymsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ASYMSIM_VERSION);

  // simulate
  SimulateOptions sim;
  std::string sim_mode;
  ProfileArgs sim_profile;
  int max_turns = 20;
  bool name_only = false;
  std::optional<bool> show_partner_secret;
  bool no_log_prompts = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run episodes for every task");
  simulate_cmd->add_option("--mode", sim_mode, "agents | mindreaders | script")
      ->required()
      ->check(CLI::IsMember(kModeNames, CLI::ignore_case));
  simulate_cmd->add_option("--tasks", sim.tasks_path, "Task file (JSON)")->required();
  add_profile_options(simulate_cmd, sim_profile, "--profile");
  simulate_cmd->add_option("--episodes-per-task", sim.episodes_per_task)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--max-turns", max_turns)->capture_default_str();
  simulate_cmd->add_option("--concurrency", sim.concurrency)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--out", sim.out_dir)->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Selects fixture variants")->capture_default_str();
  simulate_cmd->add_flag("--name-only", name_only, "Show only names in character profiles");
  simulate_cmd->add_option("--show-partner-secret", show_partner_secret, "true | false");
  simulate_cmd->add_flag("--no-log-prompts", no_log_prompts, "Omit prompt text from call logs");

  // evaluate
  EvaluateOptions eval;
  ProfileArgs judge_profile;
  std::string deal_name = "tagged";
  const std::map<std::string, DealPolicy> kDeals{
      {"tagged", DealPolicy::kTagged}, {"all", DealPolicy::kAll}, {"never", DealPolicy::kNever}};
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a run with an LLM judge");
  evaluate_cmd->add_option("run_dir", eval.run_dir)->required()->check(CLI::ExistingDirectory);
  add_profile_options(evaluate_cmd, judge_profile, "--judge");
  evaluate_cmd->add_option("--deal", deal_name, "tagged | all | never")
      ->capture_default_str()
      ->check(CLI::IsMember({"tagged", "all", "never"}));
  evaluate_cmd->add_option("--concurrency", eval.concurrency)->check(CLI::PositiveNumber);
  evaluate_cmd->add_flag("--retry-failed", eval.retry_failed);

  // analyze
  AnalyzeOptions analyze_opts;
  bool speak_only = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare runs and write reports");
  analyze_cmd->add_option("run_dirs", analyze_opts.run_dirs)
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze_cmd->add_option("--out", analyze_opts.out_dir, "Report directory");
  analyze_cmd->add_option("--annotations", analyze_opts.annotations_path)
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--labels", analyze_opts.labels_path)->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--speak-only", speak_only, "Count only spoken turns for verbosity");

  // export-finetune
  std::string ft_run, ft_out;
  std::string speakers_name = "both";
  const std::map<std::string, SpeakerFilter> kSpeakers{
      {"both", SpeakerFilter::kBoth}, {"first", SpeakerFilter::kFirst},
      {"second", SpeakerFilter::kSecond}};
  auto* finetune_cmd = app.add_subcommand("export-finetune", "Write chat JSONL from a Script run");
  finetune_cmd->add_option("run_dir", ft_run)->required()->check(CLI::ExistingDirectory);
  finetune_cmd->add_option("--out", ft_out, "JSONL path (default <run>/reports/finetune.jsonl)");
  finetune_cmd->add_option("--speakers", speakers_name, "both | first | second")
      ->capture_default_str()
      ->check(CLI::IsMember({"both", "first", "second"}));

  // export-pairs
  std::string pairs_left, pairs_right, pairs_out = "pairs";
  uint64_t pairs_seed = 0;
  size_t max_pairs = 0;
  auto* pairs_cmd = app.add_subcommand("export-pairs", "Blinded transcript pairs for annotation");
  pairs_cmd->add_option("left", pairs_left)->required()->check(CLI::ExistingDirectory);
  pairs_cmd->add_option("right", pairs_right)->required()->check(CLI::ExistingDirectory);
  pairs_cmd->add_option("--out", pairs_out)->capture_default_str();
  pairs_cmd->add_option("--seed", pairs_seed)->capture_default_str();
  pairs_cmd->add_option("--max-pairs", max_pairs, "0 = all");

  // annotate
  std::string annotate_pairs, annotate_out = "annotations.jsonl";
  auto* annotate_cmd = app.add_subcommand("annotate", "Record naturalness choices interactively");
  annotate_cmd->add_option("pairs", annotate_pairs)->required()->check(CLI::ExistingFile);
  annotate_cmd->add_option("--out", annotate_out)->capture_default_str();

  // card
  std::string card_run, card_freetext, card_out;
  bool card_strict = false;
  auto* card_cmd = app.add_subcommand("card", "Render the social simulation card");
  card_cmd->add_option("run_dir", card_run)->required()->check(CLI::ExistingDirectory);
  card_cmd->add_option("--freetext", card_freetext, "JSON with the free-text sections")
      ->check(CLI::ExistingFile);
  card_cmd->add_option("--out", card_out, "Default: stdout");
  card_cmd->add_flag("--strict", card_strict, "Fail when a required free-text section is missing");

  // dump-prompt
  std::string dump_tasks, dump_task;
  std::string dump_mode_name = "agents";
  int dump_viewer = 0;
  int dump_max_turns = 20;
  bool dump_name_only = false;
  std::optional<bool> dump_partner_secret;
  auto* dump_cmd = app.add_subcommand("dump-prompt", "Print the opening prompt for a task");
  dump_cmd->add_option("--tasks", dump_tasks)->required()->check(CLI::ExistingFile);
  dump_cmd->add_option("--task", dump_task, "Task id or index (default: first)");
  dump_cmd->add_option("--mode", dump_mode_name)
      ->capture_default_str()
      ->check(CLI::IsMember(kModeNames, CLI::ignore_case));
  dump_cmd->add_option("--viewer", dump_viewer)->check(CLI::Range(0, 1));
  dump_cmd->add_option("--max-turns", dump_max_turns);
  dump_cmd->add_flag("--name-only", dump_name_only);
  dump_cmd->add_option("--show-partner-secret", dump_partner_secret);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate_cmd) {
      sim.mode = mode_from_string(sim_mode);
      sim.profile = resolve_profile(sim_profile);
      sim.engine.max_turns = max_turns;
      sim.engine.log_prompts = !no_log_prompts;
      sim.policy = VisibilityPolicy::for_mode(sim.mode);
      if (name_only) sim.policy.profile_detail = ProfileDetail::kNameOnly;
      if (show_partner_secret) sim.policy.show_partner_secret = *show_partner_secret;
      SimulateResult r = simulate(sim, clock_for(sim.profile), env.transport);
      out << "run " << r.manifest.run_id << " at " << r.run_dir << ": " << r.executed
          << " executed, " << r.skipped << " already complete, " << r.failed << " failed\n";
      return r.failed > 0 ? kExitPartial : kExitOk;
    }
    if (*evaluate_cmd) {
      eval.deal = kDeals.at(deal_name);
      eval.judge = resolve_profile(judge_profile);
      EvaluateResult r = evaluate(eval, clock_for(eval.judge), env.transport);
      out << "scored " << r.scored << ", cached " << r.cached << ", failed " << r.failed
          << ", skipped incomplete " << r.skipped_incomplete << "\n";
      return r.failed > 0 ? kExitPartial : kExitOk;
    }
    if (*analyze_cmd) {
      analyze_opts.verbosity.count_non_verbal_and_action = !speak_only;
      ComparisonReport report = analyze(analyze_opts);
      out << render_report_markdown(report);
      return kExitOk;
    }
    if (*finetune_cmd) {
      if (ft_out.empty()) ft_out = (fs::path(ft_run) / "reports" / "finetune.jsonl").string();
      ExportManifest m = export_run_finetune(ft_run, ft_out, kSpeakers.at(speakers_name));
      out << to_json_value(m).dump(2) << "\n";
      return kExitOk;
    }
    if (*pairs_cmd) {
      BlindedExport exported =
          export_run_pairs(pairs_left, pairs_right, pairs_out, pairs_seed, max_pairs);
      out << "wrote " << exported.pairs.size() << " pairs to " << pairs_out << "\n";
      return kExitOk;
    }
    if (*annotate_cmd) {
      auto pairs = pairs_from_jsonl(read_file(annotate_pairs));
      std::istream& in = env.in ? *env.in : std::cin;
      auto choices = run_annotation_session(pairs, in, out);
      write_file(annotate_out, choices_to_jsonl(choices));
      out << "recorded " << choices.size() << " choices to " << annotate_out << "\n";
      return kExitOk;
    }
    if (*card_cmd) {
      json freetext = card_freetext.empty() ? json::object()
                                            : json::parse(read_file(card_freetext));
      std::string card = render_simulation_card(load_manifest(card_run), freetext, card_strict);
      if (card_out.empty()) {
        out << card;
      } else {
        write_file(card_out, card);
      }
      return kExitOk;
    }
    if (*dump_cmd) {
      const SimulationMode dump_mode = mode_from_string(dump_mode_name);
      auto tasks = load_tasks(dump_tasks);
      if (tasks.empty()) throw ConfigError("no tasks in " + dump_tasks);
      const SocialTask* task = &tasks.front();
      if (!dump_task.empty()) {
        task = nullptr;
        for (const auto& t : tasks) {
          if (t.id == dump_task) task = &t;
        }
        if (!task && std::all_of(dump_task.begin(), dump_task.end(), ::isdigit)) {
          size_t index = std::stoul(dump_task);
          if (index < tasks.size()) task = &tasks[index];
        }
        if (!task) throw ConfigError("no task " + dump_task);
      }
      if (dump_mode == SimulationMode::kScript) {
        out << build_script_prompt(*task, dump_max_turns).text() << "\n";
        return kExitOk;
      }
      VisibilityPolicy policy = VisibilityPolicy::for_mode(dump_mode);
      if (dump_name_only) policy.profile_detail = ProfileDetail::kNameOnly;
      if (dump_partner_secret) policy.show_partner_secret = *dump_partner_secret;
      out << build_agent_prompt(*task, dump_viewer, dump_mode, {}, 0, policy).text() << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingSection& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

}  // namespace asymsim
