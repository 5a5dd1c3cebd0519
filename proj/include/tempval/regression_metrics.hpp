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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tempval::metrics {

// Predictions and targets of equal, nonzero length; all values finite.
struct PairedSeries {
  std::vector<double> predictions;
  std::vector<double> targets;

  void validate() const;
};

// Point-forecast regression scores.
//
// nll is the mean unit-variance Gaussian negative log-likelihood
// 0.5 * ln(2 pi) + 0.5 * (y - yhat)^2, which suits z-scored targets. crps is
// the CRPS of a degenerate (point) forecast and therefore equals mae.
// r2 is empty when the targets are constant; spearman is empty when either
// series is constant.
struct RegressionReport {
  std::size_t n = 0;
  double mse = 0.0;
  double mae = 0.0;
  std::optional<double> r2;
  std::optional<double> spearman;
  double nll = 0.0;
  double crps = 0.0;
};

RegressionReport regression_report(const PairedSeries& series);

// Ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. Empty when a series is constant.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

enum class SpearmanMode {
  per_parameter_mean,  // score each parameter, then average
  pooled,              // one score over all parameters stacked together
};

// Scores for (location, scale, skewness) triples.
struct ParameterReport {
  std::array<RegressionReport, 3> per_parameter;
  RegressionReport averaged;
};

// `averaged` is the mean of the three per-parameter reports. Its optional
// fields are empty when any parameter's is. With SpearmanMode::pooled the
// averaged spearman is computed on the stacked series instead.
ParameterReport parameter_report(std::span<const std::array<double, 3>> predictions,
                                 std::span<const std::array<double, 3>> targets,
                                 SpearmanMode mode = SpearmanMode::per_parameter_mean);

}  // namespace tempval::metrics
