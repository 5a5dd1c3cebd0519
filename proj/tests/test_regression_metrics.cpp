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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tempval/errors.hpp"
#include "tempval/regression_metrics.hpp"

using namespace tempval;
using namespace tempval::metrics;

TEST_SUITE("regression_metrics") {
  TEST_CASE("perfect predictions") {
    const std::vector<double> t = {0.3, -1.0, 2.5, 0.8};
    const auto r = regression_report({t, t});
    CHECK(r.mse == 0.0);
    CHECK(r.mae == 0.0);
    CHECK(*r.r2 == 1.0);
    CHECK(*r.spearman == doctest::Approx(1.0));
    CHECK(r.nll == doctest::Approx(0.9189385332).epsilon(1e-10));
    CHECK(r.crps == 0.0);
  }

  TEST_CASE("reference values") {
    // Frozen from an independent numpy/scipy computation.
    const auto r = regression_report({{0.5, -1.2, 2.0, 0.1, 0.9}, {0.7, -1.0, 1.5, 0.0, 1.4}});
    CHECK(r.n == 5);
    CHECK(r.mse == doctest::Approx(0.118).epsilon(1e-12));
    CHECK(r.mae == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(*r.r2 == doctest::Approx(0.8643054277828888).epsilon(1e-12));
    CHECK(r.nll == doctest::Approx(0.9779385332046726).epsilon(1e-12));
    CHECK(r.crps == r.mae);
  }

  TEST_CASE("nll tracks mse") {
    const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
    CHECK(half_log_two_pi + 0.8763 / 2.0 == doctest::Approx(1.3571).epsilon(1e-4));
    const auto r = regression_report({{1.0, 2.0, 3.0}, {1.5, 1.0, 3.25}});
    CHECK(std::abs(r.nll - r.mse / 2.0 - half_log_two_pi) <= 1e-12);
  }

  TEST_CASE("rank correlation") {
    CHECK(*spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{40, 30, 20, 10}) ==
          doctest::Approx(-1.0));
    CHECK(*spearman(std::vector<double>{1, 2, 2, 3, 5}, std::vector<double>{1, 3, 2, 4, 4}) ==
          doctest::Approx(0.9473684210526317).epsilon(1e-12));
    CHECK_FALSE(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}).has_value());
    CHECK(average_ranks(std::vector<double>{3, 1, 3, 2, 3}) == std::vector<double>{4, 1, 4, 2, 4});
  }

  TEST_CASE("mean predictor has zero r2") {
    const std::vector<double> t = {1, 4, 2, 7};
    const std::vector<double> mean(4, 3.5);
    CHECK(*regression_report({mean, t}).r2 == doctest::Approx(0.0));
    CHECK_FALSE(regression_report({t, std::vector<double>(4, 2.0)}).r2.has_value());
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(regression_report({{}, {}}), ArgumentError);
    CHECK_THROWS_AS(regression_report({{1.0}, {1.0, 2.0}}), ArgumentError);
    CHECK_THROWS_AS(regression_report({{NAN}, {1.0}}), ArgumentError);
  }

  TEST_CASE("per-parameter report") {
    const std::vector<std::array<double, 3>> pred = {{1, 2, 3}, {2, 2.5, 1}, {3, 4, 0}, {4, 1, 2}};
    const std::vector<std::array<double, 3>> gold = {{1.5, 2, 2}, {2, 3, 1}, {2.5, 4, 0.5}, {4, 1.5, 2}};
    const auto rep = parameter_report(pred, gold);
    double mse = 0.0;
    for (const auto& r : rep.per_parameter) mse += r.mse / 3.0;
    CHECK(rep.averaged.mse == doctest::Approx(mse).epsilon(1e-15));
    double rho = 0.0;
    for (const auto& r : rep.per_parameter) rho += *r.spearman / 3.0;
    CHECK(*rep.averaged.spearman == doctest::Approx(rho).epsilon(1e-15));

    std::vector<double> p, g;
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < pred.size(); ++i) {
        p.push_back(pred[i][k]);
        g.push_back(gold[i][k]);
      }
    }
    const auto pooled = parameter_report(pred, gold, SpearmanMode::pooled);
    CHECK(*pooled.averaged.spearman == doctest::Approx(*spearman(p, g)).epsilon(1e-15));
  }
}
