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

#include "tempval/regression_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tempval/errors.hpp"

namespace tempval::metrics {

namespace {

const double kHalfLogTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

void PairedSeries::validate() const {
  if (predictions.empty()) throw ArgumentError("paired series is empty");
  if (predictions.size() != targets.size()) {
    throw ArgumentError("predictions and targets differ in length");
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!std::isfinite(predictions[i]) || !std::isfinite(targets[i])) {
      throw ArgumentError("paired series contains a non-finite value at index " +
                          std::to_string(i));
    }
  }
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j + 1);  // mean of i+1 .. j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ArgumentError("spearman needs two nonempty series of equal length");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

RegressionReport regression_report(const PairedSeries& series) {
  series.validate();
  const auto& pred = series.predictions;
  const auto& gold = series.targets;
  const std::size_t n = pred.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  RegressionReport out;
  out.n = n;
  double sq = 0.0, abs_err = 0.0, nll = 0.0, crps = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = gold[i] - pred[i];
    sq += e * e;
    abs_err += std::abs(e);
    nll += kHalfLogTwoPi + 0.5 * e * e;
    // CRPS of a point mass at pred[i] against gold[i].
    crps += std::abs(gold[i] - pred[i]);
  }
  out.mse = sq * inv_n;
  out.mae = abs_err * inv_n;
  out.nll = nll * inv_n;
  out.crps = crps * inv_n;

  const double gold_mean = mean(gold);
  double ss_tot = 0.0;
  for (double y : gold) ss_tot += (y - gold_mean) * (y - gold_mean);
  if (ss_tot > 0.0) out.r2 = 1.0 - sq / ss_tot;
  out.spearman = spearman(pred, gold);
  return out;
}

ParameterReport parameter_report(std::span<const std::array<double, 3>> predictions,
                                 std::span<const std::array<double, 3>> targets,
                                 SpearmanMode mode) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ArgumentError("prediction and target lists must be nonempty and equal in length");
  }
  ParameterReport out;
  PairedSeries pooled;
  for (std::size_t p = 0; p < 3; ++p) {
    PairedSeries s;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      s.predictions.push_back(predictions[i][p]);
      s.targets.push_back(targets[i][p]);
    }
    pooled.predictions.insert(pooled.predictions.end(), s.predictions.begin(),
                              s.predictions.end());
    pooled.targets.insert(pooled.targets.end(), s.targets.begin(), s.targets.end());
    out.per_parameter[p] = regression_report(s);
  }

  auto& avg = out.averaged;
  avg.n = predictions.size();
  bool r2_ok = true, rho_ok = true;
  double r2 = 0.0, rho = 0.0;
  for (const auto& r : out.per_parameter) {
    avg.mse += r.mse / 3.0;
    avg.mae += r.mae / 3.0;
    avg.nll += r.nll / 3.0;
    avg.crps += r.crps / 3.0;
    if (r.r2) r2 += *r.r2 / 3.0; else r2_ok = false;
    if (r.spearman) rho += *r.spearman / 3.0; else rho_ok = false;
  }
  if (r2_ok) avg.r2 = r2;
  if (mode == SpearmanMode::pooled) {
    avg.spearman = spearman(pooled.predictions, pooled.targets);
  } else if (rho_ok) {
    avg.spearman = rho;
  }
  return out;
}

}  // namespace tempval::metrics
