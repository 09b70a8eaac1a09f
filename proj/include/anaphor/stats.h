// Copyright 2026 The Anaphor Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANAPHOR_STATS_H_
#define ANAPHOR_STATS_H_

#include <span>

namespace anaphor {

// Pooled-variance two-sample Student t test.
struct StatResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;  // two-sided
  double mean_difference = 0.0;  // mean(xs) - mean(ys)
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct Interval {
  double mean = 0.0;
  double half_width = 0.0;
};

double Mean(std::span<const double> xs);
// Unbiased (n - 1) sample variance.
double SampleVariance(std::span<const double> xs);

// Two-sided test of mean(xs) == mean(ys). Needs at least two values per side.
// With zero pooled variance, equal means give t = 0, p = 1 and unequal means
// throw std::domain_error.
StatResult TwoSampleT(std::span<const double> xs, std::span<const double> ys);

// One-sided p for mean(xs) > mean(ys), derived from the same statistic.
double OneSidedPGreater(const StatResult& r);

// mean +- t_{0.975, n-1} * s / sqrt(n).
Interval Ci95(std::span<const double> xs);

// Student t distribution helpers.
double StudentTCdf(double t, double df);
double StudentTQuantile(double p, double df);

}  // namespace anaphor

#endif  // ANAPHOR_STATS_H_
