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

#include "tempval/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "tempval/errors.hpp"

namespace tempval::optim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Smallest admissible Marquardt scale entry; keeps the damping term from
// vanishing for columns that are (locally) zero.
constexpr double kMinScale = 1e-300;

}  // namespace

Eigen::VectorXd Box::project(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

void Box::validate(Eigen::Index n) const {
  if (lower.size() != n || upper.size() != n) {
    throw ArgumentError("bound vectors do not match the parameter count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw ArgumentError("invalid bounds for parameter " + std::to_string(i));
    }
  }
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::step_tolerance: return "step_tolerance";
    case StopReason::objective_tolerance: return "objective_tolerance";
    case StopReason::gradient_tolerance: return "gradient_tolerance";
    case StopReason::zero_residual: return "zero_residual";
    case StopReason::max_evaluations: return "max_evaluations";
  }
  return "unknown";
}

Eigen::MatrixXd central_difference_jacobian(const ResidualFunction& f,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& r0, const Box& box,
                                            std::size_t* evaluations) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = r0.size();
  Eigen::MatrixXd jac(m, n);
  Eigen::VectorXd probe = x;
  Eigen::VectorXd r1(m), r2(m);
  std::size_t count = 0;

  const double base_step = std::cbrt(kEps);
  for (Eigen::Index j = 0; j < n; ++j) {
    double h = base_step * std::max(1.0, std::abs(x[j]));
    const double lo = box.lower[j];
    const double hi = box.upper[j];
    // Narrow boxes: shrink until at least one stencil fits.
    while (h > 0.0 && x[j] - h < lo && x[j] + 2 * h > hi && x[j] - 2 * h < lo) {
      h *= 0.5;
    }

    if (x[j] - h >= lo && x[j] + h <= hi) {
      probe[j] = x[j] + h;
      f(probe, r1);
      probe[j] = x[j] - h;
      f(probe, r2);
      jac.col(j) = (r1 - r2) / (2.0 * h);
    } else if (x[j] + 2 * h <= hi) {
      probe[j] = x[j] + h;
      f(probe, r1);
      probe[j] = x[j] + 2 * h;
      f(probe, r2);
      jac.col(j) = (-3.0 * r0 + 4.0 * r1 - r2) / (2.0 * h);
    } else {
      probe[j] = x[j] - h;
      f(probe, r1);
      probe[j] = x[j] - 2 * h;
      f(probe, r2);
      jac.col(j) = (3.0 * r0 - 4.0 * r1 + r2) / (2.0 * h);
    }
    probe[j] = x[j];
    count += 2;
  }
  if (evaluations != nullptr) *evaluations += count;
  return jac;
}

SolverResult solve_bounded_least_squares(const ResidualFunction& f,
                                         Eigen::Index residual_count,
                                         const Eigen::VectorXd& x0, const Box& box,
                                         const SolverOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw ArgumentError("no parameters to optimize");
  if (residual_count <= 0) throw ArgumentError("no residuals");
  box.validate(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(x0[i])) throw ArgumentError("initial point must be finite");
  }

  SolverResult out;
  Eigen::VectorXd x = box.project(x0);
  Eigen::VectorXd r(residual_count);
  f(x, r);
  out.evaluations = 1;
  double ssr = r.squaredNorm();
  out.initial_ssr = ssr;
  if (!std::isfinite(ssr)) throw NumericError("residuals are not finite at the initial point");

  Eigen::MatrixXd jac = central_difference_jacobian(f, x, r, box, &out.evaluations);
  Eigen::VectorXd scale = jac.colwise().squaredNorm().transpose().cwiseMax(kMinScale);

  double mu = 1e-3;
  double nu = 2.0;
  Eigen::VectorXd r_trial(residual_count);
  std::vector<Eigen::Index> free_idx;
  free_idx.reserve(static_cast<std::size_t>(n));

  auto finish = [&](StopReason reason) {
    out.x = x;
    out.residuals = r;
    out.ssr = ssr;
    out.reason = reason;
    out.converged = reason != StopReason::max_evaluations;
    return out;
  };

  if (ssr == 0.0) return finish(StopReason::zero_residual);

  while (true) {
    const Eigen::VectorXd grad = jac.transpose() * r;

    free_idx.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned_low = x[i] <= box.lower[i] && grad[i] > 0.0;
      const bool pinned_high = x[i] >= box.upper[i] && grad[i] < 0.0;
      if (!pinned_low && !pinned_high) free_idx.push_back(i);
    }
    if (free_idx.empty()) return finish(StopReason::gradient_tolerance);

    const double r_norm = std::sqrt(ssr);
    double cosine = 0.0;
    for (Eigen::Index i : free_idx) {
      const double col_norm = jac.col(i).norm();
      if (col_norm > 0.0) cosine = std::max(cosine, std::abs(grad[i]) / (col_norm * r_norm));
    }
    if (cosine <= options.gradient_tolerance) return finish(StopReason::gradient_tolerance);

    const auto k = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd jac_free(residual_count, k);
    Eigen::VectorXd grad_free(k), scale_free(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      jac_free.col(c) = jac.col(free_idx[c]);
      grad_free[c] = grad[free_idx[c]];
      scale_free[c] = scale[free_idx[c]];
    }
    const Eigen::MatrixXd normal = jac_free.transpose() * jac_free;

    // Inner loop: raise damping until a step lowers the SSR or a stop
    // criterion fires.
    while (true) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += mu * scale_free;
      const Eigen::VectorXd step_free = damped.ldlt().solve(-grad_free);

      Eigen::VectorXd trial = x;
      for (Eigen::Index c = 0; c < k; ++c) trial[free_idx[c]] += step_free[c];
      trial = box.project(trial);
      const Eigen::VectorXd step = trial - x;

      if (!step.allFinite() ||
          step.norm() <= options.step_tolerance * (options.step_tolerance + x.norm())) {
        return finish(StopReason::step_tolerance);
      }

      f(trial, r_trial);
      ++out.evaluations;
      const double ssr_trial = r_trial.squaredNorm();
      const double predicted = ssr - (r + jac * step).squaredNorm();
      const double actual = ssr - ssr_trial;

      if (std::isfinite(ssr_trial) && actual > 0.0) {
        const double rho = predicted > 0.0 ? actual / predicted : 1.0;
        const double previous = ssr;
        x = trial;
        r = r_trial;
        ssr = ssr_trial;
        ++out.iterations;
        mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;

        if (ssr == 0.0) return finish(StopReason::zero_residual);
        if (actual <= options.objective_tolerance * previous) {
          return finish(StopReason::objective_tolerance);
        }
        if (out.evaluations >= options.max_evaluations) {
          return finish(StopReason::max_evaluations);
        }
        jac = central_difference_jacobian(f, x, r, box, &out.evaluations);
        scale = scale.cwiseMax(jac.colwise().squaredNorm().transpose());
        break;
      }

      mu *= nu;
      nu *= 2.0;
      if (out.evaluations >= options.max_evaluations || !std::isfinite(mu)) {
        return finish(StopReason::max_evaluations);
      }
    }
  }
}

}  // namespace tempval::optim
