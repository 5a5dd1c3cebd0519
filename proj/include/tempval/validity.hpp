// Copyright 2026 The tempval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Temporal-validity queries in linear time (minutes).
//
// Curves live on the log axis and every query maps minutes through to_log()
// first. Interval probabilities integrate the log-space density over the
// log-space image of the interval; no change-of-variables factor is applied,
// because curves are normalized in log space. The integrand is the piecewise
// linear interpolant of the curve on its normalization grid, so interval
// masses add up exactly and the whole domain carries the same mass the AUC
// normalization assigned to it.

#pragma once

#include <cstddef>
#include <vector>

#include "tempval/curve.hpp"

namespace tempval {

// Closed interval [a, b] of minutes with 1 <= a < b.
class IntervalQuery {
 public:
  // Throws ArgumentError for non-finite bounds or b <= a, DomainError for a < 1.
  IntervalQuery(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  double a_;
  double b_;
};

// curve(to_log(minutes)). Throws DomainError for minutes < 1.
double validity_at(const ValidityCurve& curve, double minutes);

// Probability mass of [a, b]. Requires an auc_one curve (SemanticsError
// otherwise). Mass outside the working domain is zero.
double interval_probability(const ValidityCurve& curve, const IntervalQuery& query);

// Minute at which the curve peaks on its working domain.
double peak_minutes(const ValidityCurve& curve);

struct CurveSample {
  double minutes = 0.0;
  double log_value = 0.0;
  double value = 0.0;
};

// n rows spaced uniformly in log time between from_minutes and to_minutes
// (inclusive). Throws ArgumentError for n < 2 or an empty/invalid range.
std::vector<CurveSample> sample_curve(const ValidityCurve& curve, std::size_t n,
                                      double from_minutes, double to_minutes);

}  // namespace tempval
