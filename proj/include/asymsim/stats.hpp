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

// Significance testing: regularized incomplete beta, Student t tail
// probabilities, Welch's two-sample test and the one-sample t test.

#ifndef ASYMSIM_STATS_HPP_
#define ASYMSIM_STATS_HPP_

#include <span>

#include "asymsim/domain.hpp"

namespace asymsim {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  // Zero variance on both sides: t is 0 or +-inf and p is 1 or kMinP.
  bool degenerate = false;
};

void to_json(json& j, const TTestResult& r);

// Reported in place of an exact zero so p stays in (0, 1].
inline constexpr double kMinP = 1e-300;

// Regularized I_x(a, b). Throws std::domain_error outside a>0, b>0, x in [0,1].
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Both samples need at least two values (std::invalid_argument otherwise).
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

TTestResult one_sample_t_test(std::span<const double> sample, double mu);

double mean(std::span<const double> values);
// n - 1 denominator.
double sample_variance(std::span<const double> values);

// Significance marker used in reports: "*" iff p < 0.001.
const char* significance_star(double p);

}  // namespace asymsim

#endif  // ASYMSIM_STATS_HPP_
