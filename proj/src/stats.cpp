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

#include "asymsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asymsim {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 100000;

// Lentz evaluation of the continued fraction for I_x(a, b); valid (and
// fast) for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  const double front = std::exp(log_front) / a;

  double f = 1.0, c = 1.0, d = 0.0;
  for (int i = 0; i <= kMaxIterations; ++i) {
    const int m = i / 2;
    double numerator;
    if (i == 0) {
      numerator = 1.0;
    } else if (i % 2 == 0) {
      numerator = (m * (b - m) * x) / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    } else {
      numerator = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    }
    d = 1.0 + numerator * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    c = 1.0 + numerator / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    const double cd = c * d;
    f *= cd;
    if (std::fabs(1.0 - cd) < kEps) return front * (f - 1.0);
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

void to_json(json& j, const TTestResult& r) {
  auto finite_or_string = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  j = json{{"t", finite_or_string(r.t)},
           {"df", finite_or_string(r.df)},
           {"p_two_sided", r.p_two_sided},
           {"degenerate", r.degenerate}};
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - beta_continued_fraction(b, a, 1.0 - x);
  return beta_continued_fraction(a, b, x);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("student_t_two_sided_p: df must be > 0");
  if (std::isnan(t)) throw std::domain_error("student_t_two_sided_p: t is NaN");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample variance needs n >= 2");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("welch_t_test needs at least two values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double mean_a = mean(a), mean_b = mean(b);
  const double qa = sample_variance(a) / na;
  const double qb = sample_variance(b) / nb;

  TTestResult out;
  if (qa == 0.0 && qb == 0.0) {
    out.degenerate = true;
    out.df = na + nb - 2.0;
    if (mean_a == mean_b) {
      out.t = 0.0;
      out.p_two_sided = 1.0;
    } else {
      out.t = mean_a > mean_b ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
      out.p_two_sided = kMinP;
    }
    return out;
  }
  out.t = (mean_a - mean_b) / std::sqrt(qa + qb);
  out.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  out.p_two_sided = std::max(student_t_two_sided_p(out.t, out.df), kMinP);
  return out;
}

TTestResult one_sample_t_test(std::span<const double> sample, double mu) {
  if (sample.size() < 2) throw std::invalid_argument("one_sample_t_test needs n >= 2");
  const double n = static_cast<double>(sample.size());
  const double m = mean(sample);
  const double var = sample_variance(sample);
  TTestResult out;
  out.df = n - 1.0;
  if (var == 0.0) {
    out.degenerate = true;
    if (m == mu) {
      out.t = 0.0;
      out.p_two_sided = 1.0;
    } else {
      out.t = m > mu ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      out.p_two_sided = kMinP;
    }
    return out;
  }
  out.t = (m - mu) / std::sqrt(var / n);
  out.p_two_sided = std::max(student_t_two_sided_p(out.t, out.df), kMinP);
  return out;
}

const char* significance_star(double p) { return p < 0.001 ? "*" : ""; }

}  // namespace asymsim
