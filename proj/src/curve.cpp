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

#include "tempval/curve.hpp"

#include <cmath>
#include <string>

#include "tempval/errors.hpp"

namespace tempval {

namespace {

constexpr double kPeakTolerance = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void WorkingDomain::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw ArgumentError("working domain needs finite bounds with min < max");
  }
  if (grid_n < 2) throw ArgumentError("working domain grid needs at least 2 nodes");
}

double WorkingDomain::node(std::size_t i) const {
  if (i + 1 == grid_n) return upper;
  return lower + spacing() * static_cast<double>(i);
}

WorkingDomain WorkingDomain::default_for(LogBase base) {
  WorkingDomain d;
  d.upper = 180.0 * conversion_factor(LogBase{kDefaultLogBase}, base);
  return d;
}

std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::auc_one: return "auc_one";
    case Normalization::proportional: return "proportional";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "raw") return Normalization::raw;
  if (name == "auc_one") return Normalization::auc_one;
  if (name == "proportional") return Normalization::proportional;
  throw ArgumentError("unknown normalization '" + std::string(name) + "'");
}

double ValidityCurve::operator()(double log_value) const {
  return scale * density(params, log_value);
}

void ValidityCurve::validate() const {
  tempval::validate(params);
  if (!std::isfinite(scale) || !(scale > 0.0)) throw ArgumentError("curve scale must be > 0");
  domain.validate();
}

double trapezoid_integral(const ValidityCurve& curve) {
  curve.validate();
  const WorkingDomain& d = curve.domain;
  double sum = 0.5 * (curve(d.lower) + curve(d.upper));
  for (std::size_t i = 1; i + 1 < d.grid_n; ++i) sum += curve(d.node(i));
  return sum * d.spacing();
}

Peak locate_peak(const ValidityCurve& curve) {
  curve.validate();
  const WorkingDomain& d = curve.domain;
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < d.grid_n; ++i) {
    const double v = curve(d.node(i));
    if (std::isfinite(v) && v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!(best_value > 0.0)) throw NumericError("curve is zero across the working domain");

  double a = best == 0 ? d.lower : d.node(best - 1);
  double b = best + 1 == d.grid_n ? d.upper : d.node(best + 1);
  // A symmetric difference keeps its sign well past the point where a plain
  // comparison of values flattens out, so bisect on it when it brackets.
  const double h = 1e-3 * d.spacing();
  const auto slope = [&](double x) { return curve(x + h) - curve(x - h); };
  if (slope(a) > 0.0 && slope(b) < 0.0) {
    while (b - a > kPeakTolerance) {
      const double mid = 0.5 * (a + b);
      const double s = slope(mid);
      if (s == 0.0) a = b = mid;
      else (s > 0.0 ? a : b) = mid;
    }
    Peak peak{0.5 * (a + b), 0.0};
    peak.value = curve(peak.x);
    return peak;
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = curve(c);
  double fe = curve(e);
  while (b - a > kPeakTolerance) {
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = curve(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = curve(e);
    }
  }
  Peak peak{0.5 * (a + b), 0.0};
  peak.value = curve(peak.x);
  // The bracket can collapse onto a domain endpoint that is better still.
  if (best_value > peak.value) peak = {d.node(best), best_value};
  return peak;
}

ValidityCurve auc_normalize(const ValidityCurve& curve, const WorkingDomain& domain) {
  ValidityCurve out = curve;
  out.domain = domain;
  const double area = trapezoid_integral(out);
  if (!std::isfinite(area) || !(area > 0.0)) {
    throw NumericError("curve integral over the working domain is not positive");
  }
  out.scale = curve.scale / area;
  out.normalization = Normalization::auc_one;
  return out;
}

ValidityCurve proportional_rescale(const ValidityCurve& curve) {
  const Peak peak = locate_peak(curve);
  ValidityCurve out = curve;
  out.scale = curve.scale / peak.value;
  out.normalization = Normalization::proportional;
  return out;
}

DistributionParams stretch_params(const DistributionParams& params, double factor) {
  if (!std::isfinite(factor) || !(factor > 0.0)) {
    throw ArgumentError("stretch factor must be > 0");
  }
  return std::visit(
      Overloaded{
          [factor](const GaussianParams& p) -> DistributionParams {
            return GaussianParams{factor * p.mu, factor * p.sigma};
          },
          [factor](const ExponentialParams& p) -> DistributionParams {
            return ExponentialParams{p.lambda / factor};
          },
          [factor](const LogNormalParams& p) -> DistributionParams {
            return LogNormalParams{p.mu + std::log(factor), p.sigma};
          },
          [factor](const GammaParams& p) -> DistributionParams {
            return GammaParams{p.shape, factor * p.scale};
          },
          [factor](const SkewNormalParams& p) -> DistributionParams {
            return SkewNormalParams{factor * p.xi, factor * p.omega, p.alpha};
          },
      },
      params);
}

ValidityCurve convert_curve(const ValidityCurve& curve, LogBase to) {
  curve.validate();
  if (curve.base == to) return curve;
  const double r = conversion_factor(curve.base, to);
  ValidityCurve out = curve;
  if (const auto* sn = std::get_if<SkewNormalParams>(&curve.params)) {
    out.params = convert_params(*sn, curve.base, to);
  } else {
    out.params = stretch_params(curve.params, r);
  }
  out.base = to;
  out.domain.lower = r * curve.domain.lower;
  out.domain.upper = r * curve.domain.upper;
  if (curve.normalization == Normalization::proportional) out.scale = curve.scale * r;
  return out;
}

}  // namespace tempval
