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

#ifndef ANAPHOR_TESTS_STATS_ORACLE_H_
#define ANAPHOR_TESTS_STATS_ORACLE_H_

#include <vector>

namespace anaphor::testing {

// Reference values computed with mpmath at 50 significant digits from the
// textbook formulas (regularized incomplete beta for the t CDF, root finding
// for the quantile).
inline const std::vector<std::vector<double>> kSamples = {
    {2.1, 2.9, 3.0, 3.8, 2.2},
    {4.9, 5.1, 6.0, 5.5, 4.5},
    {11, 12, 10, 13, 9, 11, 12, 14, 10, 11},
    {15, 16, 14, 17, 15, 13, 16, 18, 15, 14},
    {24, 22, 27, 25, 23, 26, 24, 21, 25, 26},
    {0.5, 0.7, 0.2, 0.9},
    {1, 2},
    {9.9, 9.8, 10.0, 9.95, 9.85, 9.9},
    {-1.5, 0.3, 2.2, -0.7, 1.1, 0.0, 0.4},
    {100.25, 99.5, 101.75, 100.0, 98.5, 102.0, 99.75, 100.5},
};

struct TRef {
  double t;
  int df;
  double p;
  double lo;
  double hi;
};

inline const TRef kTRefs[] = {
    {-5.9813374353507226, 8, 0.00033019666312628432, -3.3252796693563374, -1.4747203306436626},
    {-5.9850560166457974, 18, 1.1620397096943458e-5, -5.4041118642150704, -2.5958881357849296},
    {24.417896221702, 12, 1.3417801143566226e-11, 21.608014412277165, 25.841985587722835},
    {-34.779304190854659, 6, 3.7647591027505672e-8, -8.9909853583276261, -7.809014641672374},
    {-164.7854105225604, 13, 5.7023204019313146e-23, -101.33544256555538, -98.712771720158903},
};

inline const double kCiRefs[][2] = {
    {2.8, 0.85575785424779766},       {5.2, 0.71328166236324075},
    {11.3, 1.0690537668991026},       {15.3, 1.0690537668991026},
    {24.3, 1.3509959142848623},       {0.575, 0.47515177399864626},
    {1.5, 6.3531023680873523},        {9.9, 0.074206305738929191},
    {0.25714285714285719, 1.1057705035861037}, {100.28125, 0.96387123962394739},
};

}  // namespace anaphor::testing

#endif  // ANAPHOR_TESTS_STATS_ORACLE_H_
