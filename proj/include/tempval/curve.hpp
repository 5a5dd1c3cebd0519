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

#include <cstddef>
#include <string_view>

#include "tempval/distributions.hpp"
#include "tempval/timescale.hpp"

namespace tempval {

// Interval of the log-time axis on which curves are normalized and searched,
// discretized into grid_n equally spaced nodes (endpoints included).
struct WorkingDomain {
  double lower = 0.0;
  double upper = 180.0;
  std::size_t grid_n = 10001;

  // Throws ArgumentError unless lower < upper (both finite) and grid_n >= 2.
  void validate() const;
  double spacing() const { return (upper - lower) / static_cast<double>(grid_n - 1); }
  double node(std::size_t i) const;

  // [0, 180] base-1.1 units (one minute to past a decade) expressed in `base`.
  static WorkingDomain default_for(LogBase base);

  friend bool operator==(const WorkingDomain&, const WorkingDomain&) = default;
};

enum class Normalization { raw, auc_one, proportional };

std::string_view normalization_name(Normalization n);
Normalization parse_normalization(std::string_view name);

// scale * f(x; params) over log time of the given base.
//   raw           amplitude straight out of a fit
//   auc_one       trapezoid integral over `domain` equals 1
//   proportional  maximum over `domain` equals 1
struct ValidityCurve {
  DistributionParams params = SkewNormalParams{};
  double scale = 1.0;
  LogBase base;
  Normalization normalization = Normalization::raw;
  WorkingDomain domain;

  Family family() const { return family_of(params); }
  double operator()(double log_value) const;
  void validate() const;
};

struct Peak {
  double x = 0.0;      // log-time location
  double value = 0.0;  // curve value there
};

// Trapezoid integral of the curve over its domain grid.
double trapezoid_integral(const ValidityCurve& curve);

// Grid scan over the domain followed by golden-section refinement (interval
// width <= 1e-9) around the best node. Throws NumericError when the curve is
// zero or non-finite everywhere on the grid.
Peak locate_peak(const ValidityCurve& curve);

// Rescales so the trapezoid integral over `domain` is 1 and records the domain
// on the result. Throws NumericError if the integral is not finite and > 0.
ValidityCurve auc_normalize(const ValidityCurve& curve, const WorkingDomain& domain);

// Rescales so the maximum over the curve's domain is 1. Throws NumericError
// for a flat-zero curve.
ValidityCurve proportional_rescale(const ValidityCurve& curve);

// Re-expresses the curve on another log base. Densities stretch with the
// axis, so auc_one and raw curves keep their scale (interval masses are
// unchanged) while proportional curves are rescaled to keep their peak at 1.
ValidityCurve convert_curve(const ValidityCurve& curve, LogBase to);

// Maps parameters of any family through x -> factor * x.
DistributionParams stretch_params(const DistributionParams& params, double factor);

}  // namespace tempval
