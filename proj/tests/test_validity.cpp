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
#include "oracles.hpp"
#include "tempval/errors.hpp"
#include "tempval/validity.hpp"

using namespace tempval;

namespace {

ValidityCurve skew_curve(double xi, double omega, double alpha, Normalization n) {
  ValidityCurve c;
  c.params = SkewNormalParams{xi, omega, alpha};
  const auto auc = auc_normalize(c, WorkingDomain{});
  return n == Normalization::proportional ? proportional_rescale(auc) : auc;
}

}  // namespace

TEST_SUITE("validity") {
  TEST_CASE("point validity") {
    const auto prop = skew_curve(42.96, 5, 0, Normalization::proportional);
    CHECK(validity_at(prop, 60.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(validity_at(prop, peak_minutes(prop)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(validity_at(prop, 1e7) < 1e-6);
    CHECK_THROWS_AS(validity_at(prop, 0.5), DomainError);
  }

  TEST_CASE("interval probability") {
    const auto auc = skew_curve(80, 10, 0, Normalization::auc_one);
    const double domain_end = from_log({180.0, LogBase{}});
    CHECK(interval_probability(auc, IntervalQuery(1.0, domain_end)) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(interval_probability(auc, IntervalQuery(1.0, 1e30)) == doctest::Approx(1.0).epsilon(1e-4));

    // One scale either side of the location: Phi(1) - Phi(-1).
    const double one_sd = oracle::normal_cdf_by_quadrature(1.0) - oracle::normal_cdf_by_quadrature(-1.0);
    const IntervalQuery central(from_log({70.0, LogBase{}}), from_log({90.0, LogBase{}}));
    CHECK(std::abs(interval_probability(auc, central) - one_sd) <= 1e-3);

    const double a = 500, b = 3000, c = 20000;
    const double ab = interval_probability(auc, IntervalQuery(a, b));
    const double bc = interval_probability(auc, IntervalQuery(b, c));
    const double ac = interval_probability(auc, IntervalQuery(a, c));
    CHECK(std::abs(ab + bc - ac) <= 1e-9);
  }

  TEST_CASE("interval probability needs an AUC-normalized curve") {
    const auto prop = skew_curve(80, 10, 0, Normalization::proportional);
    CHECK_THROWS_AS(interval_probability(prop, IntervalQuery(1, 100)), SemanticsError);
    CHECK_THROWS_AS(IntervalQuery(0.5, 10), DomainError);
    CHECK_THROWS_AS(IntervalQuery(10, 10), ArgumentError);
    CHECK_THROWS_AS(IntervalQuery(10, 5), ArgumentError);
  }

  TEST_CASE("peak location") {
    const auto sym = skew_curve(42.96, 5, 0, Normalization::auc_one);
    CHECK(to_log(peak_minutes(sym)).value == doctest::Approx(42.96).epsilon(1e-9));

    // Mode of SN(0, 1, 1) solves phi(x) = x Phi(x); bisection on that equation.
    double lo = 0.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (oracle::normal_pdf(mid) - mid * oracle::normal_cdf_by_quadrature(mid) > 0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(0.506).epsilon(1e-3));
    ValidityCurve unit;
    unit.params = SkewNormalParams{0, 1, 1};
    unit.domain = {-5, 5, 10001};
    CHECK(locate_peak(unit).x == doctest::Approx(lo).epsilon(1e-6));

    CHECK(to_log(peak_minutes(skew_curve(60, 8, 4, Normalization::auc_one))).value > 60.0);
    CHECK(to_log(peak_minutes(skew_curve(60, 8, -4, Normalization::auc_one))).value < 60.0);
  }

  TEST_CASE("curve sampling") {
    const auto c = skew_curve(70, 9, 1.5, Normalization::proportional);
    const auto two = sample_curve(c, 2, 1.0, 525600.0);
    REQUIRE(two.size() == 2);
    CHECK(two[0].minutes == 1.0);
    CHECK(two[1].minutes == doctest::Approx(525600.0).epsilon(1e-12));

    const auto rows = sample_curve(c, 101, 1.0, 525600.0);
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].minutes > rows[i - 1].minutes);
    for (const auto& r : rows) CHECK(std::abs(r.value - validity_at(c, r.minutes)) <= 1e-12);

    CHECK_THROWS_AS(sample_curve(c, 1, 1.0, 10.0), ArgumentError);
    CHECK_THROWS_AS(sample_curve(c, 10, 10.0, 10.0), ArgumentError);
  }
}
