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

// Fitting amplitude-scaled densities to annotation points.
//
// A fit minimizes SSR(theta, S) = sum_i (y_i - S * f(x_i; theta))^2 under box
// bounds. The fitted curve is then normalized twice on the working domain:
//   N      = trapezoid integral of S_fit * f
//   f_max  = max of S_fit * f / N
//   S_final = S_fit / (N * f_max)
// so that S_final * f peaks at exactly 1 (the proportional validity curve).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tempval/curve.hpp"
#include "tempval/distributions.hpp"
#include "tempval/least_squares.hpp"

namespace tempval {

// One annotated (log time, relative validity) pair.
struct AnnotationPoint {
  double x = 0.0;
  double y = 0.0;

  // Throws ArgumentError unless x is finite and y in (0, 1].
  void validate() const;
};

struct FitOptions {
  WorkingDomain domain;
  // Starting shapes tried for the skew-normal; the best SSR wins.
  std::vector<double> multistart_alphas = {-3.0, 0.0, 3.0};
  optim::SolverOptions solver;

  void validate() const;
};

struct StartRecord {
  std::vector<double> initial;  // shape parameters followed by the amplitude
  double initial_ssr = 0.0;
  double final_ssr = 0.0;
  bool converged = false;
};

struct FitResult {
  DistributionParams params = SkewNormalParams{};
  double s_fit = 0.0;    // fitted amplitude S
  double auc = 0.0;      // N
  double f_max = 0.0;    // peak of the AUC-normalized curve
  double s_final = 0.0;  // s_fit / (auc * f_max)
  double ssr = 0.0;
  double rmse = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  WorkingDomain domain;
  std::vector<StartRecord> starts;

  Family family() const { return family_of(params); }

  // Curve with amplitude s_fit, as optimized.
  ValidityCurve raw_curve(LogBase base = LogBase{}) const;
  // Curve with amplitude s_fit / auc.
  ValidityCurve auc_curve(LogBase base = LogBase{}) const;
  // Curve with amplitude s_final.
  ValidityCurve proportional_curve(LogBase base = LogBase{}) const;
};

// Requires at least parameter_count(family) + 1 points with distinct x.
// Non-convergence is reported through FitResult::converged, never thrown.
FitResult fit(std::span<const AnnotationPoint> points, Family family,
              const FitOptions& options = {});

// Independent fits run on up to `threads` workers; output order matches
// input order and every result is identical to a sequential fit().
std::vector<FitResult> fit_batch(std::span<const std::vector<AnnotationPoint>> point_sets,
                                 Family family, const FitOptions& options = {},
                                 unsigned threads = 0);

// sqrt(mean((y - curve(x))^2)). Throws ArgumentError on empty input.
double rmse(std::span<const AnnotationPoint> points, const ValidityCurve& curve);

}  // namespace tempval
