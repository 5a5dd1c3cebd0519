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

// Box-constrained nonlinear least squares.
//
// Minimizes ||r(x)||^2 subject to lower <= x <= upper with a projected
// Levenberg-Marquardt iteration: at each step the variables sitting on a bound
// whose gradient points out of the box are frozen, a Marquardt-scaled damped
// Gauss-Newton step is solved on the remaining ones, and the trial point is
// projected back into the box. Damping follows Nielsen's gain-ratio update.
// Jacobians are taken by central differences, switching to second-order
// one-sided formulas next to a bound so the residual is never evaluated
// outside the box.

#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace tempval::optim {

// Fills `residuals` (already sized to the problem's residual count) at x.
using ResidualFunction =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& residuals)>;

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  // Throws ArgumentError when sizes differ or lower > upper anywhere.
  void validate(Eigen::Index n) const;
};

struct SolverOptions {
  double step_tolerance = 1e-10;       // relative to ||x||
  double objective_tolerance = 1e-12;  // relative decrease of the SSR
  double gradient_tolerance = 1e-12;   // cosine between residual and free columns
  std::size_t max_evaluations = 10000;
};

enum class StopReason {
  step_tolerance,
  objective_tolerance,
  gradient_tolerance,
  zero_residual,
  max_evaluations,
};

const char* stop_reason_name(StopReason reason);

struct SolverResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residuals;
  double initial_ssr = 0.0;
  double ssr = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  StopReason reason = StopReason::max_evaluations;
  bool converged = false;
};

// Central-difference Jacobian at x (m residuals). `r0` must hold r(x); it is
// only used by the one-sided stencils. Adds the number of residual
// evaluations to *evaluations when non-null.
Eigen::MatrixXd central_difference_jacobian(const ResidualFunction& f,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& r0, const Box& box,
                                            std::size_t* evaluations = nullptr);

// x0 is projected into the box before the first evaluation.
SolverResult solve_bounded_least_squares(const ResidualFunction& f,
                                         Eigen::Index residual_count,
                                         const Eigen::VectorXd& x0, const Box& box,
                                         const SolverOptions& options = {});

}  // namespace tempval::optim
