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

// Command-line front end. Exit codes: 0 ok, 1 partial failures, 2 config error.

#ifndef ASYMSIM_TOOLS_CLI_HPP_
#define ASYMSIM_TOOLS_CLI_HPP_

#include <iosfwd>
#include <memory>

#include "asymsim/backend.hpp"

namespace asymsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitConfig = 2;

struct CliEnvironment {
  std::istream* in = nullptr;  // annotate reads choices from here; std::cin when null
  std::shared_ptr<HttpTransport> transport;  // real HTTP when null
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace asymsim

#endif  // ASYMSIM_TOOLS_CLI_HPP_
