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
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tempval/curve.hpp"
#include "tempval/errors.hpp"
#include "tempval/fitting.hpp"
#include "tempval/scenarios.hpp"

using namespace tempval;

namespace {

std::vector<AnnotationPoint> scenario_points(std::size_t s) {
  const auto& pts = reference_scenarios()[s].points;
  return {pts.begin(), pts.end()};
}

double scenario_rmse(std::size_t s, Family f) { return fit(scenario_points(s), f).rmse; }

}  // namespace

TEST_SUITE("fitting") {
  TEST_CASE("reference scenario cells") {
    CHECK(std::abs(scenario_rmse(0, Family::skew_normal) - 0.0514) <= 0.010);
    CHECK(std::abs(scenario_rmse(3, Family::gaussian) - 0.0273) <= 0.010);
    CHECK(std::abs(scenario_rmse(5, Family::skew_normal) - 0.0247) <= 0.010);
    CHECK(std::abs(scenario_rmse(1, Family::skew_normal) - 0.0357) <= 0.010);
    CHECK(std::abs(scenario_rmse(2, Family::exponential) - 0.2312) <= 0.02);
  }

  TEST_CASE("skew-normal wins every scenario") {
    for (const auto& row : run_scenarios()) {
      CHECK(row.best() == Family::skew_normal);
      CHECK(row.worst() == Family::exponential);
      CHECK(row.cells.size() == kAllFamilies.size());
    }
  }

  TEST_CASE("exact samples of a scaled skew-normal are recovered") {
    const SkewNormalParams truth{50, 10, 2};
    std::vector<AnnotationPoint> pts;
    for (double x : {42.0, 47.0, 52.0, 57.0, 62.0, 67.0, 72.0}) {
      pts.push_back({x, 0.8 * oracle::skew_normal_pdf(x, 50, 10, 2)});
    }
    const auto r = fit(pts, Family::skew_normal);
    const auto p = std::get<SkewNormalParams>(r.params);
    CHECK(r.converged);
    CHECK(std::abs(p.xi - truth.xi) <= 1e-4);
    CHECK(std::abs(p.omega - truth.omega) <= 1e-4);
    CHECK(std::abs(p.alpha - truth.alpha) <= 1e-4);
    CHECK(std::abs(r.s_fit - 0.8) <= 1e-4);
    CHECK(r.rmse <= 1e-8);
  }

  TEST_CASE("post-fit normalization") {
    const auto r = fit(scenario_points(0), Family::skew_normal);
    const auto p = std::get<SkewNormalParams>(r.params);
    const auto f = [&](double x) { return r.s_fit * oracle::skew_normal_pdf(x, p.xi, p.omega, p.alpha); };
    // Trapezoid N against a fine quadrature of the same integrand.
    CHECK(r.auc == doctest::Approx(oracle::integrate(f, 0.0, 180.0)).epsilon(1e-6));
    CHECK(r.s_final == doctest::Approx(r.s_fit / (r.auc * r.f_max)).epsilon(1e-15));
    CHECK(trapezoid_integral(r.auc_curve()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(locate_peak(r.proportional_curve()).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(locate_peak(r.auc_curve()).value == doctest::Approx(r.f_max).epsilon(1e-9));
  }

  TEST_CASE("auc_normalize") {
    ValidityCurve c;
    c.params = SkewNormalParams{60, 12, 3};
    c.scale = 3.0;
    const WorkingDomain domain;
    const auto n = auc_normalize(c, domain);
    const double oracle_n = oracle::integrate(
        [](double x) { return 3.0 * oracle::skew_normal_pdf(x, 60, 12, 3); }, 0.0, 180.0);
    CHECK(n.scale == doctest::Approx(3.0 / oracle_n).epsilon(1e-6));
    CHECK(n.normalization == Normalization::auc_one);
    CHECK(trapezoid_integral(n) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(auc_normalize(n, domain).scale == doctest::Approx(n.scale).epsilon(1e-9));

    const auto prop = proportional_rescale(n);
    CHECK(locate_peak(prop).value == doctest::Approx(1.0).epsilon(1e-6));
    for (int i = 0; i < 100; ++i) {
      const double x = 1.8 * i;
      if (n(x) > 0.0) CHECK(prop(x) / n(x) == doctest::Approx(prop.scale / n.scale).epsilon(1e-9));
    }

    ValidityCurve far;
    far.params = SkewNormalParams{-500, 1, 0};
    CHECK_THROWS_AS(auc_normalize(far, domain), NumericError);
  }

  TEST_CASE("rmse") {
    ValidityCurve c;
    c.params = GaussianParams{10, 3};
    const std::vector<AnnotationPoint> exact = {{8, c(8)}, {10, c(10)}, {13, c(13)}};
    CHECK(rmse(exact, c) == 0.0);
    const std::vector<AnnotationPoint> off = {{10, c(10) + 0.1}};
    CHECK(rmse(off, c) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(rmse(std::vector<AnnotationPoint>{}, c), ArgumentError);
  }

  TEST_CASE("fit preconditions") {
    const std::vector<AnnotationPoint> three = {{1, 0.5}, {2, 0.9}, {3, 0.4}};
    CHECK_THROWS_AS(fit(three, Family::skew_normal), ArgumentError);
    CHECK_NOTHROW(fit(three, Family::gaussian));
    const std::vector<AnnotationPoint> dup = {{1, 0.5}, {1, 0.6}, {2, 0.9}, {3, 0.4}, {4, 0.2}};
    CHECK_THROWS_AS(fit(dup, Family::skew_normal), ArgumentError);
    const std::vector<AnnotationPoint> zero = {{1, 0.0}, {2, 0.9}, {3, 0.4}, {4, 0.2}};
    CHECK_THROWS_AS(fit(zero, Family::skew_normal), ArgumentError);
    FitOptions bad;
    bad.multistart_alphas.clear();
    CHECK_THROWS_AS(fit(scenario_points(0), Family::skew_normal, bad), ArgumentError);
  }

  TEST_CASE("batch fits equal sequential fits") {
    std::vector<std::vector<AnnotationPoint>> sets;
    for (std::size_t s = 0; s < 6; ++s) sets.push_back(scenario_points(s));
    for (Family f : kAllFamilies) {
      const auto batch = fit_batch(sets, f, {}, 4);
      REQUIRE(batch.size() == sets.size());
      for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto one = fit(sets[i], f);
        CHECK(to_vector(batch[i].params) == to_vector(one.params));
        CHECK(batch[i].s_final == one.s_final);
        CHECK(batch[i].rmse == one.rmse);
      }
    }
  }

  TEST_CASE("stretched parameters describe the stretched density") {
    const double c = 0.37;
    const std::vector<DistributionParams> all = {GaussianParams{40, 6}, ExponentialParams{0.05},
                                                 LogNormalParams{3.5, 0.4}, GammaParams{6, 7},
                                                 SkewNormalParams{50, 9, -3}};
    for (const auto& p : all) {
      const auto q = stretch_params(p, c);
      for (double x : {5.0, 33.0, 48.0, 70.0}) {
        CHECK(density(q, c * x) * c == doctest::Approx(density(p, x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("base conversion of a proportional curve keeps its peak at one") {
    const auto r = fit(scenario_points(4), Family::skew_normal);
    const auto prop = r.proportional_curve();
    const auto moved = convert_curve(prop, LogBase(2));
    CHECK(moved.base == LogBase(2));
    CHECK(locate_peak(moved).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(moved.domain.upper == doctest::Approx(180.0 * std::log(1.1) / std::log(2.0)).epsilon(1e-14));
  }
}
