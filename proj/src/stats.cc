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

#include "anaphor/stats.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace anaphor {

double Mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("Mean: empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double SampleVariance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("SampleVariance: need >= 2 values");
  const double m = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double StudentTCdf(double t, double df) {
  return boost::math::cdf(boost::math::students_t(df), t);
}

double StudentTQuantile(double p, double df) {
  return boost::math::quantile(boost::math::students_t(df), p);
}

StatResult TwoSampleT(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw std::invalid_argument("TwoSampleT: each sample needs >= 2 values");
  }
  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  StatResult r;
  r.df = static_cast<int>(xs.size() + ys.size() - 2);
  r.mean_difference = Mean(xs) - Mean(ys);
  const double pooled =
      ((n1 - 1.0) * SampleVariance(xs) + (n2 - 1.0) * SampleVariance(ys)) / r.df;
  const double se = std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) {
    if (r.mean_difference != 0.0) {
      throw std::domain_error("TwoSampleT: zero variance with unequal means");
    }
    r.ci_low = r.ci_high = 0.0;
    return r;
  }
  r.statistic = r.mean_difference / se;
  r.p_value = 2.0 * StudentTCdf(-std::abs(r.statistic), r.df);
  const double half = StudentTQuantile(0.975, r.df) * se;
  r.ci_low = r.mean_difference - half;
  r.ci_high = r.mean_difference + half;
  return r;
}

double OneSidedPGreater(const StatResult& r) {
  if (r.statistic == 0.0 && r.mean_difference == 0.0) return 0.5;
  return StudentTCdf(-r.statistic, r.df);
}

Interval Ci95(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("Ci95: need >= 2 values");
  const double n = static_cast<double>(xs.size());
  Interval out;
  out.mean = Mean(xs);
  out.half_width = StudentTQuantile(0.975, n - 1.0) * std::sqrt(SampleVariance(xs) / n);
  return out;
}

}  // namespace anaphor
