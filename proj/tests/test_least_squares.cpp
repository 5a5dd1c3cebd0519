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

#include <cmath>

#include "doctest.h"
#include <Eigen/Dense>

#include "tempval/errors.hpp"
#include "tempval/least_squares.hpp"

using namespace tempval::optim;
using Eigen::VectorXd;

namespace {

Box unbounded(Eigen::Index n) {
  return {VectorXd::Constant(n, -1e300), VectorXd::Constant(n, 1e300)};
}

}  // namespace

TEST_SUITE("least_squares") {
  TEST_CASE("Rosenbrock residuals converge to (1, 1)") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) {
      r(0) = 10.0 * (x(1) - x(0) * x(0));
      r(1) = 1.0 - x(0);
    };
    const auto result = solve_bounded_least_squares(f, 2, VectorXd{{-1.2, 1.0}}, unbounded(2));
    CHECK(result.converged);
    CHECK(result.x(0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(result.x(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(result.ssr < 1e-20);
    CHECK(result.ssr <= result.initial_ssr);
  }

  TEST_CASE("linear problem matches the normal equations") {
    Eigen::MatrixXd a(5, 2);
    a << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4;
    const VectorXd b{{1.1, 2.9, 5.2, 6.8, 9.1}};
    const ResidualFunction f = [&](const VectorXd& x, VectorXd& r) { r = a * x - b; };
    const auto result = solve_bounded_least_squares(f, 5, VectorXd::Zero(2), unbounded(2));
    const VectorXd exact = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    CHECK(result.x(0) == doctest::Approx(exact(0)).epsilon(1e-8));
    CHECK(result.x(1) == doctest::Approx(exact(1)).epsilon(1e-8));
  }

  TEST_CASE("optimum outside the box lands on the bound") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) {
      r(0) = x(0) - 3.0;
      r(1) = x(1) + 1.0;
    };
    const Box box{VectorXd{{0.0, 0.0}}, VectorXd{{2.0, 5.0}}};
    const auto result = solve_bounded_least_squares(f, 2, VectorXd{{1.0, 1.0}}, box);
    CHECK(result.x(0) == doctest::Approx(2.0));
    CHECK(result.x(1) == doctest::Approx(0.0));
    CHECK(result.ssr == doctest::Approx(2.0));
  }

  TEST_CASE("residuals are never evaluated outside the box") {
    const Box box{VectorXd{{0.5, 1e-6}}, VectorXd{{4.0, 10.0}}};
    bool outside = false;
    const ResidualFunction f = [&](const VectorXd& x, VectorXd& r) {
      for (Eigen::Index i = 0; i < 2; ++i) outside |= x(i) < box.lower(i) || x(i) > box.upper(i);
      r(0) = std::log(x(1)) - 2.0;
      r(1) = x(0) * x(1) - 1.0;
      r(2) = x(0) - 7.0;
    };
    (void)solve_bounded_least_squares(f, 3, VectorXd{{0.5, 1e-6}}, box);
    CHECK_FALSE(outside);
  }

  TEST_CASE("central-difference Jacobian agrees with forward differences") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) {
      r(0) = std::sin(x(0)) * x(1);
      r(1) = std::exp(0.3 * x(0)) - x(1) * x(1);
      r(2) = x(0) / (1.0 + x(1) * x(1));
    };
    for (const VectorXd& x : {VectorXd{{0.3, 1.7}}, VectorXd{{-2.0, 0.2}}, VectorXd{{1.0, -3.0}}}) {
      VectorXd r0(3);
      f(x, r0);
      const auto jac = central_difference_jacobian(f, x, r0, unbounded(2));
      for (Eigen::Index j = 0; j < 2; ++j) {
        const double h = 1e-7;
        VectorXd xp = x;
        xp(j) += h;
        VectorXd rp(3);
        f(xp, rp);
        const VectorXd fd = (rp - r0) / h;
        CHECK((jac.col(j) - fd).cwiseAbs().maxCoeff() < 1e-5);
      }
    }
  }

  TEST_CASE("one-sided stencil at a bound stays exact for quadratics") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) { r(0) = x(0) * x(0) + 2.0 * x(0); };
    const Box box{VectorXd{{1.0}}, VectorXd{{5.0}}};
    const VectorXd x{{1.0}};
    VectorXd r0(1);
    f(x, r0);
    std::size_t evals = 0;
    const auto jac = central_difference_jacobian(f, x, r0, box, &evals);
    CHECK(jac(0, 0) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(evals > 0);
  }

  TEST_CASE("evaluation budget stops the solver") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) {
      r(0) = 10.0 * (x(1) - x(0) * x(0));
      r(1) = 1.0 - x(0);
    };
    SolverOptions options;
    options.max_evaluations = 8;
    const auto result = solve_bounded_least_squares(f, 2, VectorXd{{-1.2, 1.0}}, unbounded(2), options);
    CHECK_FALSE(result.converged);
    CHECK(result.reason == StopReason::max_evaluations);
    CHECK(result.evaluations <= 8 + 4);
  }

  TEST_CASE("box validation") {
    const ResidualFunction f = [](const VectorXd& x, VectorXd& r) { r = x; };
    const Box bad{VectorXd{{1.0}}, VectorXd{{0.0}}};
    CHECK_THROWS_AS(solve_bounded_least_squares(f, 1, VectorXd{{0.5}}, bad), tempval::ArgumentError);
  }
}
