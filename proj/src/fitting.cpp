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

#include "tempval/fitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "tempval/errors.hpp"

namespace tempval {

namespace {

constexpr double kPositiveLower = 1e-6;
constexpr double kPositiveUpper = 1e6;
constexpr double kAlphaBound = 50.0;

struct Problem {
  Family family;
  optim::Box box;
  std::vector<Eigen::VectorXd> starts;
};

double clamp_positive(double v) {
  if (!std::isfinite(v)) return 1.0;
  return std::clamp(v, kPositiveLower, kPositiveUpper);
}

// Mode of SN(0, 1, alpha): the root of alpha phi(alpha z) = z Phi(alpha z),
// which lies in [0, 1) for alpha >= 0 and mirrors for alpha < 0.
double standard_skew_normal_mode(double alpha) {
  const double a = std::abs(alpha);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double z = 0.5 * (lo + hi);
    (a * std_normal_pdf(a * z) - z * std_normal_cdf(a * z) > 0.0 ? lo : hi) = z;
  }
  return std::copysign(0.5 * (lo + hi), alpha);
}

// Bounds and deterministic starting points for one family. Every start is
// anchored at the highest annotation point.
Problem make_problem(std::span<const AnnotationPoint> points, Family family,
                     const FitOptions& options) {
  double x_min = points.front().x, x_max = points.front().x;
  double x_sum = 0.0, y_max = points.front().y, x_peak = points.front().x;
  for (const auto& p : points) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    x_sum += p.x;
    if (p.y > y_max) {
      y_max = p.y;
      x_peak = p.x;
    }
  }
  const double range = x_max - x_min;
  const double spread = range / 4.0;
  const double x_mean = x_sum / static_cast<double>(points.size());

  const auto n = static_cast<Eigen::Index>(parameter_count(family) + 1);
  Problem prob{family, {Eigen::VectorXd(n), Eigen::VectorXd(n)}, {}};
  auto& lo = prob.box.lower;
  auto& hi = prob.box.upper;
  lo.setConstant(kPositiveLower);
  hi.setConstant(kPositiveUpper);

  std::vector<std::vector<double>> shapes;
  switch (family) {
    case Family::gaussian:
      lo[0] = x_min - range;
      hi[0] = x_max + range;
      shapes.push_back({x_peak, spread});
      break;
    case Family::exponential:
      shapes.push_back({x_mean > 0.0 ? 1.0 / x_mean : 1.0});
      break;
    case Family::log_normal: {
      // Location lives in ln-space, so its box is the ln image of the data
      // range widened the same way as for the other families.
      const double ln_min = std::log(std::max(x_min, kPositiveLower));
      const double ln_max = std::log(std::max(x_max, kPositiveLower));
      const double ln_range = std::max(ln_max - ln_min, 1.0);
      lo[0] = ln_min - ln_range;
      hi[0] = ln_max + ln_range;
      const double anchor = std::max(x_peak, kPositiveLower);
      shapes.push_back({std::log(anchor), spread / anchor});
      break;
    }
    case Family::gamma: {
      const double anchor = x_peak > 0.0 ? x_peak : std::max(x_mean, 1.0);
      shapes.push_back({(anchor / spread) * (anchor / spread), spread * spread / anchor});
      break;
    }
    case Family::skew_normal:
      lo[0] = x_min - range;
      hi[0] = x_max + range;
      lo[2] = -kAlphaBound;
      hi[2] = kAlphaBound;
      // Each start puts its own mode, not its location, on the highest point.
      for (double alpha : options.multistart_alphas) {
        shapes.push_back({x_peak - spread * standard_skew_normal_mode(alpha), spread, alpha});
      }
      break;
  }

  for (auto& shape : shapes) {
    Eigen::VectorXd start(n);
    for (std::size_t i = 0; i < shape.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      start[k] = std::clamp(shape[i], lo[k], hi[k]);
    }
    start = prob.box.project(start);
    const auto shape_params =
        from_vector(family, std::span<const double>(start.data(), shape.size()));
    start[n - 1] = clamp_positive(y_max / density(shape_params, x_peak));
    prob.starts.push_back(std::move(start));
  }
  return prob;
}

void check_points(std::span<const AnnotationPoint> points, Family family) {
  const std::size_t needed = parameter_count(family) + 1;
  if (points.size() < needed) {
    throw ArgumentError("fitting " + std::string(family_name(family)) + " needs at least " +
                        std::to_string(needed) + " points, got " +
                        std::to_string(points.size()));
  }
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) {
    p.validate();
    xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw ArgumentError("annotation x values must be distinct");
  }
}

double shape_of(const Eigen::VectorXd& v, Family family) {
  return family == Family::skew_normal ? std::abs(v[2]) : 0.0;
}

}  // namespace

void AnnotationPoint::validate() const {
  if (!std::isfinite(x)) throw ArgumentError("annotation x must be finite");
  if (!std::isfinite(y) || !(y > 0.0) || y > 1.0) {
    throw ArgumentError("annotation y must lie in (0, 1]");
  }
}

void FitOptions::validate() const {
  domain.validate();
  if (multistart_alphas.empty()) throw ArgumentError("at least one starting shape is needed");
  for (double a : multistart_alphas) {
    if (!std::isfinite(a) || std::abs(a) > kAlphaBound) {
      throw ArgumentError("starting shapes must lie in [-50, 50]");
    }
  }
  if (solver.max_evaluations == 0) throw ArgumentError("max evaluations must be positive");
}

ValidityCurve FitResult::raw_curve(LogBase base) const {
  return ValidityCurve{params, s_fit, base, Normalization::raw, domain};
}

ValidityCurve FitResult::auc_curve(LogBase base) const {
  return ValidityCurve{params, s_fit / auc, base, Normalization::auc_one, domain};
}

ValidityCurve FitResult::proportional_curve(LogBase base) const {
  return ValidityCurve{params, s_final, base, Normalization::proportional, domain};
}

FitResult fit(std::span<const AnnotationPoint> points, Family family,
              const FitOptions& options) {
  options.validate();
  check_points(points, family);
  const Problem prob = make_problem(points, family, options);
  const std::size_t shape_count = parameter_count(family);

  const auto residuals = [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
    const auto params = from_vector(family, std::span<const double>(v.data(), shape_count));
    const double amplitude = v[static_cast<Eigen::Index>(shape_count)];
    for (std::size_t i = 0; i < points.size(); ++i) {
      r[static_cast<Eigen::Index>(i)] = amplitude * density(params, points[i].x) - points[i].y;
    }
  };

  FitResult result;
  result.domain = options.domain;
  std::optional<optim::SolverResult> best;
  for (const auto& start : prob.starts) {
    auto run = optim::solve_bounded_least_squares(
        residuals, static_cast<Eigen::Index>(points.size()), start, prob.box, options.solver);
    result.starts.push_back({std::vector<double>(start.data(), start.data() + start.size()),
                             run.initial_ssr, run.ssr, run.converged});
    result.iterations += run.iterations;
    result.evaluations += run.evaluations;

    bool better = !best.has_value();
    if (best) {
      const double tie = 1e-12 * std::max(run.ssr, best->ssr) + 1e-300;
      if (run.ssr < best->ssr - tie) {
        better = true;
      } else if (std::abs(run.ssr - best->ssr) <= tie &&
                 shape_of(run.x, family) < shape_of(best->x, family)) {
        better = true;
      }
    }
    if (better) best = std::move(run);
  }

  const Eigen::VectorXd& v = best->x;
  result.params = from_vector(family, std::span<const double>(v.data(), shape_count));
  result.s_fit = v[static_cast<Eigen::Index>(shape_count)];
  result.ssr = best->ssr;
  result.rmse = std::sqrt(best->ssr / static_cast<double>(points.size()));
  result.converged = best->converged;

  const ValidityCurve raw = result.raw_curve();
  result.auc = trapezoid_integral(raw);
  if (!std::isfinite(result.auc) || !(result.auc > 0.0)) {
    throw NumericError("fitted curve has no mass on the working domain");
  }
  ValidityCurve normalized = raw;
  normalized.scale = result.s_fit / result.auc;
  result.f_max = locate_peak(normalized).value;
  result.s_final = result.s_fit / (result.auc * result.f_max);
  return result;
}

std::vector<FitResult> fit_batch(std::span<const std::vector<AnnotationPoint>> point_sets,
                                 Family family, const FitOptions& options, unsigned threads) {
  std::vector<FitResult> out(point_sets.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(point_sets.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < point_sets.size(); ++i) out[i] = fit(point_sets[i], family, options);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(point_sets.size());
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < point_sets.size(); i = next++) {
        try {
          out[i] = fit(point_sets[i], family, options);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double rmse(std::span<const AnnotationPoint> points, const ValidityCurve& curve) {
  if (points.empty()) throw ArgumentError("rmse needs at least one point");
  double sum = 0.0;
  for (const auto& p : points) {
    const double d = p.y - curve(p.x);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(points.size()));
}

}  // namespace tempval
