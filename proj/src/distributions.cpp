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

#include "tempval/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tempval/errors.hpp"

namespace tempval {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be finite");
  }
}

void require_positive(double v, const char* what) {
  require_finite(v, what);
  if (!(v > 0.0)) throw ArgumentError(std::string(what) + " must be > 0");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void SkewNormalParams::validate() const {
  require_finite(xi, "skew-normal location");
  require_positive(omega, "skew-normal scale");
  require_finite(alpha, "skew-normal shape");
}

void GaussianParams::validate() const {
  require_finite(mu, "gaussian mean");
  require_positive(sigma, "gaussian sigma");
}

void ExponentialParams::validate() const { require_positive(lambda, "exponential rate"); }

void LogNormalParams::validate() const {
  require_finite(mu, "log-normal mu");
  require_positive(sigma, "log-normal sigma");
}

void GammaParams::validate() const {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
}

void validate(const DistributionParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

Family family_of(const DistributionParams& params) {
  return static_cast<Family>(params.index());
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::exponential: return "exponential";
    case Family::log_normal: return "log_normal";
    case Family::gamma: return "gamma";
    case Family::skew_normal: return "skew_normal";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  if (name == "lognormal") return Family::log_normal;
  if (name == "skewnormal" || name == "skew-normal") return Family::skew_normal;
  if (name == "normal") return Family::gaussian;
  throw ArgumentError("unknown distribution family '" + std::string(name) + "'");
}

std::size_t parameter_count(Family family) {
  switch (family) {
    case Family::exponential: return 1;
    case Family::skew_normal: return 3;
    default: return 2;
  }
}

std::vector<double> to_vector(const DistributionParams& params) {
  return std::visit(
      Overloaded{
          [](const GaussianParams& p) { return std::vector<double>{p.mu, p.sigma}; },
          [](const ExponentialParams& p) { return std::vector<double>{p.lambda}; },
          [](const LogNormalParams& p) { return std::vector<double>{p.mu, p.sigma}; },
          [](const GammaParams& p) { return std::vector<double>{p.shape, p.scale}; },
          [](const SkewNormalParams& p) {
            return std::vector<double>{p.xi, p.omega, p.alpha};
          },
      },
      params);
}

DistributionParams from_vector(Family family, std::span<const double> v) {
  if (v.size() != parameter_count(family)) {
    throw ArgumentError("wrong number of parameters for " +
                        std::string(family_name(family)));
  }
  switch (family) {
    case Family::gaussian: return GaussianParams{v[0], v[1]};
    case Family::exponential: return ExponentialParams{v[0]};
    case Family::log_normal: return LogNormalParams{v[0], v[1]};
    case Family::gamma: return GammaParams{v[0], v[1]};
    case Family::skew_normal: return SkewNormalParams{v[0], v[1], v[2]};
  }
  throw ArgumentError("unknown family");
}

double std_normal_pdf(double z) {
  return std::numbers::inv_sqrtpi / std::numbers::sqrt2 * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double skew_normal_density(const SkewNormalParams& p, double x) {
  const double z = (x - p.xi) / p.omega;
  return 2.0 / p.omega * std_normal_pdf(z) * std_normal_cdf(p.alpha * z);
}

double density(const DistributionParams& params, double x) {
  validate(params);
  return std::visit(
      Overloaded{
          [x](const GaussianParams& p) {
            return std_normal_pdf((x - p.mu) / p.sigma) / p.sigma;
          },
          [x](const ExponentialParams& p) {
            return x < 0.0 ? 0.0 : p.lambda * std::exp(-p.lambda * x);
          },
          [x](const LogNormalParams& p) {
            if (x <= 0.0) return 0.0;
            return std_normal_pdf((std::log(x) - p.mu) / p.sigma) / (x * p.sigma);
          },
          [x](const GammaParams& p) {
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
              if (p.shape == 1.0) return 1.0 / p.scale;
              return p.shape < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
            }
            const double log_pdf = -std::lgamma(p.shape) - p.shape * std::log(p.scale) +
                                   (p.shape - 1.0) * std::log(x) - x / p.scale;
            return std::exp(log_pdf);
          },
          [x](const SkewNormalParams& p) { return skew_normal_density(p, x); },
      },
      params);
}

}  // namespace tempval
