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

#include <filesystem>
#include <sstream>

#include "asymsim/run.hpp"
#include "doctest.h"
#include "support/support.hpp"

namespace asymsim {
namespace {

namespace fs = std::filesystem;
using testing::data_path;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args, CliEnvironment env = {}) {
  args.insert(args.begin(), "asymsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, env);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string run_dir_of(const std::string& out_dir) {
  for (const auto& e : fs::directory_iterator(out_dir)) return e.path().string();
  return {};
}

TEST_CASE("dump-prompt prints the opening prompts") {
  const std::string tasks = data_path("tasks.json");
  CHECK(cli({"dump-prompt", "--tasks", tasks}).out ==
        testing::golden("agents_donovan_turn0.txt") + "\n");
  CHECK(cli({"dump-prompt", "--tasks", tasks, "--mode", "mindreaders"}).out ==
        testing::golden("mindreaders_donovan_turn0.txt") + "\n");
  CHECK(cli({"dump-prompt", "--tasks", tasks, "--task", "0", "--mode", "script"}).out ==
        testing::golden("script_donovan_benjamin.txt") + "\n");
  CHECK(cli({"dump-prompt", "--tasks", tasks, "--name-only"}).out ==
        testing::golden("agents_donovan_name_only.txt") + "\n");
  auto bike = cli({"dump-prompt", "--tasks", tasks, "--task", "craigslist-bike", "--viewer", "1"});
  CHECK(bike.code == kExitOk);
  CHECK(bike.out.find("Imagine you are Samuel Anderson") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 2") {
  testing::TempDir dir;
  const std::string tasks = data_path("tasks.json");
  CHECK(cli({"simulate", "--mode", "chorus", "--tasks", tasks, "--profile", "x"}).code ==
        kExitConfig);
  CHECK(cli({"simulate", "--mode", "agents", "--tasks", dir.str("none.json"), "--profile",
             "fixture:" + data_path("fixtures/agents.json"), "--out", dir.str("out")})
            .code == kExitConfig);
  auto unknown = cli({"simulate", "--mode", "agents", "--tasks", tasks, "--profile", "nobody",
                      "--profiles", data_path("profiles.json"), "--out", dir.str("out")});
  CHECK(unknown.code == kExitConfig);
  CHECK(unknown.err.find("nobody") != std::string::npos);
  CHECK(cli({"dump-prompt", "--tasks", tasks, "--task", "missing"}).code == kExitConfig);
  CHECK(cli({"frobnicate"}).code == kExitConfig);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("missing API keys are reported before any request") {
  testing::TempDir dir;
  write_file(dir.str("profiles.json"),
             R"({"live": {"endpoint": "http://127.0.0.1:9/v1", "model": "m",
                          "api_key_env": "ASYMSIM_TEST_UNSET_KEY"}})");
  auto r = cli({"simulate", "--mode", "agents", "--tasks", data_path("tasks.json"), "--profile",
                "live", "--profiles", dir.str("profiles.json"), "--episodes-per-task", "1",
                "--out", dir.str("out")});
  CHECK(r.code == kExitPartial);
  RunManifest m = load_manifest(run_dir_of(dir.str("out")));
  for (const auto& s : m.episodes) {
    CHECK(s.status != "complete");
    CHECK(s.error.find("ASYMSIM_TEST_UNSET_KEY") != std::string::npos);
  }
}

TEST_CASE("the full pipeline through the command line") {
  testing::TempDir dir;
  const std::string tasks = data_path("tasks.json");
  const std::string profiles = data_path("profiles.json");
  auto sim = cli({"simulate", "--mode", "agents", "--tasks", tasks, "--profile", "fixture-agents",
                  "--profiles", profiles, "--episodes-per-task", "2", "--out", dir.str("a")});
  REQUIRE(sim.code == kExitOk);
  CHECK(sim.out.find(": 6 executed, 0 already complete, 0 failed") != std::string::npos);
  CHECK(cli({"simulate", "--mode", "agents", "--tasks", tasks, "--profile", "fixture-agents",
             "--profiles", profiles, "--episodes-per-task", "2", "--out", dir.str("a")})
            .out.find(": 0 executed, 6 already complete") != std::string::npos);
  auto script = cli({"simulate", "--mode", "script", "--tasks", tasks, "--profile",
                     "fixture:" + data_path("fixtures/script.json"), "--episodes-per-task", "2",
                     "--out", dir.str("s")});
  REQUIRE(script.code == kExitOk);
  const std::string agents_run = run_dir_of(dir.str("a"));
  const std::string script_run = run_dir_of(dir.str("s"));

  for (const auto& run : {agents_run, script_run}) {
    auto eval = cli({"evaluate", run, "--judge", "fixture-judge", "--profiles", profiles});
    CHECK(eval.code == kExitOk);
    CHECK(eval.out.find("scored 6, cached 0, failed 0") != std::string::npos);
  }
  auto report = cli({"analyze", agents_run, script_run, "--out", dir.str("reports")});
  CHECK(report.code == kExitOk);
  CHECK(report.out.find("| script |") != std::string::npos);
  CHECK(fs::exists(dir.path() / "reports" / "comparison.json"));

  auto ft = cli({"export-finetune", script_run, "--speakers", "first"});
  CHECK(ft.code == kExitOk);
  CHECK(json::parse(ft.out)["speakers"] == "first");
  CHECK(fs::exists(fs::path(script_run) / "reports" / "finetune.jsonl"));
  CHECK(cli({"export-finetune", agents_run}).code == kExitConfig);

  auto pairs = cli({"export-pairs", agents_run, script_run, "--out", dir.str("pairs")});
  CHECK(pairs.out.find("wrote 6 pairs") != std::string::npos);
  std::istringstream answers("A\nmaybe\nb\nq\n");
  auto ann = cli({"annotate", dir.str("pairs/pairs.jsonl"), "--out", dir.str("ann.jsonl")},
                 {&answers, nullptr});
  CHECK(ann.out.find("recorded 2 choices") != std::string::npos);
  auto with_ann = cli({"analyze", agents_run, script_run, "--out", dir.str("reports"),
                       "--annotations", dir.str("ann.jsonl"), "--labels",
                       dir.str("pairs/labels.json")});
  CHECK(with_ann.code == kExitOk);
  CHECK(with_ann.out.find("Naturalness") != std::string::npos);

  auto card = cli({"card", script_run});
  CHECK(card.code == kExitOk);
  CHECK(card.out.rfind("# Social Simulation Card", 0) == 0);
  CHECK(card.out.find("Humans in the loop: yes") != std::string::npos);
  CHECK(cli({"card", script_run, "--strict"}).code == kExitConfig);
}

}  // namespace
}  // namespace asymsim
