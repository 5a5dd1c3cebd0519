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

#include "tempval/validity.hpp"

#include <algorithm>
#include <cmath>

#include "tempval/errors.hpp"

namespace tempval {

namespace {

// Index of the grid cell [node(i), node(i + 1)] containing x (clamped).
std::size_t cell_of(const WorkingDomain& d, double x) {
  const double pos = std::floor((x - d.lower) / d.spacing());
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), d.grid_n - 2);
}

double interpolate(const ValidityCurve& curve, double x) {
  const WorkingDomain& d = curve.domain;
  const std::size_t i = cell_of(d, x);
  const double x0 = d.node(i);
  const double x1 = d.node(i + 1);
  const double t = (x - x0) / (x1 - x0);
  return (1.0 - t) * curve(x0) + t * curve(x1);
}

}  // namespace

IntervalQuery::IntervalQuery(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("interval bounds must be finite");
  if (a < 1.0) throw DomainError("sub-minute time unsupported");
  if (!(b > a)) throw ArgumentError("interval needs b > a");
}

double validity_at(const ValidityCurve& curve, double minutes) {
  return curve(to_log(minutes, curve.base).value);
}

double interval_probability(const ValidityCurve& curve, const IntervalQuery& query) {
  if (curve.normalization != Normalization::auc_one) {
    throw SemanticsError(
        "interval probabilities need a density; apply auc_normalize to the curve first");
  }
  curve.validate();
  const WorkingDomain& d = curve.domain;
  const double lo = std::max(to_log(query.a(), curve.base).value, d.lower);
  const double hi = std::min(to_log(query.b(), curve.base).value, d.upper);
  if (!(hi > lo)) return 0.0;

  // Nodes strictly inside (lo, hi).
  std::size_t first = cell_of(d, lo) + 1;
  while (first < d.grid_n && d.node(first) <= lo) ++first;
  std::size_t last = cell_of(d, hi);
  while (last + 1 < d.grid_n && d.node(last + 1) < hi) ++last;
  while (last > 0 && d.node(last) >= hi) --last;

  const double v_lo = interpolate(curve, lo);
  const double v_hi = interpolate(curve, hi);
  if (first > last || first >= d.grid_n) return 0.5 * (hi - lo) * (v_lo + v_hi);

  double prev_x = lo;
  double prev_v = v_lo;
  double area = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double x = d.node(i);
    const double v = curve(x);
    area += 0.5 * (x - prev_x) * (v + prev_v);
    prev_x = x;
    prev_v = v;
  }
  area += 0.5 * (hi - prev_x) * (v_hi + prev_v);
  return area;
}

double peak_minutes(const ValidityCurve& curve) {
  return from_log({locate_peak(curve).x, curve.base});
}

std::vector<CurveSample> sample_curve(const ValidityCurve& curve, std::size_t n,
                                      double from_minutes, double to_minutes) {
  if (n < 2) throw ArgumentError("sampling needs at least 2 rows");
  if (!std::isfinite(from_minutes) || !std::isfinite(to_minutes) ||
      !(to_minutes > from_minutes)) {
    throw ArgumentError("sampling range needs finite bounds with min < max");
  }
  curve.validate();
  const double lo = to_log(from_minutes, curve.base).value;
  const double hi = to_log(to_minutes, curve.base).value;

  std::vector<CurveSample> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double l =
        i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double minutes = i == 0 ? from_minutes : i + 1 == n ? to_minutes : from_log({l, curve.base});
    rows.push_back({minutes, l, curve(l)});
  }
  return rows;
}

}  // namespace tempval
