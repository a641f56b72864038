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

#ifndef ASYMSIM_JSON_EXTRACT_HPP_
#define ASYMSIM_JSON_EXTRACT_HPP_

#include <optional>
#include <string_view>

#include "asymsim/domain.hpp"

namespace asymsim {

// Finds the first balanced {...} span in free text that parses as a JSON
// object. Models wrap their output in code fences or chatter, so every
// opening brace is tried in order.
std::optional<json> extract_first_json_object(std::string_view text);

// Same, but prefers the contents of a ```json fence when one is present.
std::optional<json> extract_fenced_or_first_json_object(std::string_view text);

}  // namespace asymsim

#endif  // ASYMSIM_JSON_EXTRACT_HPP_
