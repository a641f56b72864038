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

// Blinded pairwise naturalness annotation: export of side-randomized
// transcript pairs, the unblinding key, and import of annotator choices.
// All files are JSON-lines except the key.

#ifndef ASYMSIM_ANNOTATION_HPP_
#define ASYMSIM_ANNOTATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "asymsim/analysis.hpp"
#include "asymsim/domain.hpp"

namespace asymsim {

struct BlindedPair {
  std::string pair_id;
  std::string scenario;
  std::string transcript_a;
  std::string transcript_b;

  bool operator==(const BlindedPair&) const = default;
};

struct BlindedExport {
  std::vector<BlindedPair> pairs;
  std::map<std::string, PairLabel> labeling;
};

std::string render_transcript(const Episode& episode);

// Pairs the k-th complete episode of each task across the two sides and
// randomizes which one is shown as A. Deterministic in `seed`.
BlindedExport make_blinded_pairs(const std::vector<Episode>& left, const std::string& left_label,
                                 const std::vector<Episode>& right,
                                 const std::string& right_label, uint64_t seed,
                                 size_t max_pairs = 0);

std::string pairs_to_jsonl(const std::vector<BlindedPair>& pairs);
std::vector<BlindedPair> pairs_from_jsonl(const std::string& text);

json labeling_to_json(const std::map<std::string, PairLabel>& labeling);
std::map<std::string, PairLabel> labeling_from_json(const json& doc);

std::string choices_to_jsonl(const std::vector<NaturalnessChoice>& choices);
// Throws std::invalid_argument on a winner other than "A"/"B".
std::vector<NaturalnessChoice> choices_from_jsonl(const std::string& text);

// Terminal loop: shows each pair and reads "A", "B" or "q" per line.
std::vector<NaturalnessChoice> run_annotation_session(const std::vector<BlindedPair>& pairs,
                                                      std::istream& in, std::ostream& out);

}  // namespace asymsim

#endif  // ASYMSIM_ANNOTATION_HPP_
