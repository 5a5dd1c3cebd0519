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
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace tempval {

// Skew-normal validity curve parameters in log-time units.
//   xi     location (where validity concentrates)
//   omega  scale (how long validity lasts), > 0
//   alpha  shape; positive values skew right, negative values skew left
struct SkewNormalParams {
  double xi = 0.0;
  double omega = 1.0;
  double alpha = 0.0;

  // Throws ArgumentError unless omega > 0 and every field is finite.
  void validate() const;

  friend bool operator==(const SkewNormalParams&, const SkewNormalParams&) = default;
};

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
  void validate() const;
  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

struct ExponentialParams {
  double lambda = 1.0;
  void validate() const;
  friend bool operator==(const ExponentialParams&, const ExponentialParams&) = default;
};

// mu and sigma of the underlying normal in ln-space.
struct LogNormalParams {
  double mu = 0.0;
  double sigma = 1.0;
  void validate() const;
  friend bool operator==(const LogNormalParams&, const LogNormalParams&) = default;
};

// Shape k and scale theta.
struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
  void validate() const;
  friend bool operator==(const GammaParams&, const GammaParams&) = default;
};

// Alternative order matches Family.
using DistributionParams =
    std::variant<GaussianParams, ExponentialParams, LogNormalParams, GammaParams,
                 SkewNormalParams>;

enum class Family { gaussian, exponential, log_normal, gamma, skew_normal };

inline constexpr std::array<Family, 5> kAllFamilies = {
    Family::gaussian, Family::exponential, Family::log_normal, Family::gamma,
    Family::skew_normal};

Family family_of(const DistributionParams& params);
std::string_view family_name(Family family);
// Accepts the snake_case names produced by family_name(). Throws ArgumentError.
Family parse_family(std::string_view name);

// Number of shape parameters, excluding any amplitude factor.
std::size_t parameter_count(Family family);

// Flat views used by the fitter. Order follows the struct field order.
std::vector<double> to_vector(const DistributionParams& params);
DistributionParams from_vector(Family family, std::span<const double> values);

void validate(const DistributionParams& params);

double std_normal_pdf(double z);

// Absolute error below 1e-15 across the real line (erfc based, no cancellation
// in the lower tail).
double std_normal_cdf(double z);

// Probability density of `params` at x. Returns 0 outside the family's support
// (x < 0 for the exponential, x <= 0 for log-normal and gamma). Throws
// ArgumentError when the parameters are invalid.
double density(const DistributionParams& params, double x);

// Skips validation; for hot loops over already validated parameters.
double skew_normal_density(const SkewNormalParams& p, double x);

}  // namespace tempval
