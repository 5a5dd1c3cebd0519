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

#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tempval/agreement.hpp"
#include "tempval/errors.hpp"

using namespace tempval;
using namespace tempval::metrics;

TEST_SUITE("agreement") {
  TEST_CASE("icc reference values") {
    // Hand ANOVA: SS_items 13.375, SS_raters 0.125, SS_error 0.375 -> 52/55.
    CHECK(*icc(RaterMatrix({{1, 1}, {2, 2}, {3, 3}, {4, 5}})) == doctest::Approx(52.0 / 55.0).epsilon(1e-14));

    // Classic six-target, four-judge ratings.
    const RaterMatrix judges({{9, 2, 5, 8}, {6, 1, 3, 2}, {8, 4, 6, 8}, {7, 1, 2, 6}, {10, 5, 6, 9}, {6, 2, 4, 7}});
    CHECK(*icc(judges) == doctest::Approx(0.2897637795275592).epsilon(1e-12));
    CHECK(*icc(judges, IccModel::two_way_mixed_consistency) ==
          doctest::Approx(0.7148407148407154).epsilon(1e-12));
  }

  TEST_CASE("icc edge cases") {
    CHECK(*icc(RaterMatrix({{1, 1}, {3, 3}, {2, 2}})) == doctest::Approx(1.0));
    CHECK_FALSE(icc(RaterMatrix({{2, 2}, {2, 2}})).has_value());
    CHECK_THROWS_AS(RaterMatrix({{1, 2}, {3}}), ArgumentError);
    CHECK_THROWS_AS(RaterMatrix({{1}, {3}}), ArgumentError);
    CHECK_THROWS_AS(icc(RaterMatrix({{1, 2}})), ArgumentError);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> signal(0, 1), noise(0, 100);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 10000; ++i) {
      const double v = signal(rng);
      rows.push_back({v, v + noise(rng)});
    }
    CHECK(std::abs(*icc(RaterMatrix(rows))) < 0.05);
  }

  TEST_CASE("jaccard") {
    CHECK(jaccard({"Main", "Static"}, {"Main"}) == 0.5);
    CHECK(jaccard({"a", "b"}, {"b", "a"}) == 1.0);
    CHECK(jaccard({"a"}, {"b"}) == 0.0);
    CHECK(jaccard({}, {}) == 1.0);
  }

  TEST_CASE("pk") {
    const Segmentation a(30, {4, 11, 20});
    for (std::size_t k : {1, 2, 5, 13}) CHECK(pk(a, a, k) == 0.0);
    CHECK(pk(a, a) == 0.0);

    std::vector<std::size_t> every;
    for (std::size_t p = 1; p < 20; ++p) every.push_back(p);
    const Segmentation one(20, {});
    const Segmentation all(20, every);
    CHECK(pk(one, all, 5) == oracle::pk_by_boundaries(20, {}, every, 5));
    CHECK(pk(one, all, 5) == 1.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 10 + rng() % 40;
      std::vector<std::size_t> r, h;
      for (std::size_t p = 1; p < n; ++p) {
        if (rng() % 5 == 0) r.push_back(p);
        if (rng() % 4 == 0) h.push_back(p);
      }
      const std::size_t k = 1 + rng() % (n - 1);
      CHECK(pk(Segmentation(n, r), Segmentation(n, h), k) == oracle::pk_by_boundaries(n, r, h, k));
    }
  }

  TEST_CASE("pk window and validation") {
    CHECK(default_pk_window(Segmentation(20, {10})) == 5);
    CHECK(default_pk_window(Segmentation(6, {1, 2, 3, 4, 5})) == 2);
    CHECK(Segmentation(6, {2, 4}).labels() == std::vector<std::size_t>{0, 0, 1, 1, 2, 2});
    CHECK_THROWS_AS(Segmentation(5, {0}), ArgumentError);
    CHECK_THROWS_AS(Segmentation(5, {5}), ArgumentError);
    CHECK_THROWS_AS(Segmentation(5, {3, 2}), ArgumentError);
    CHECK_THROWS_AS(pk(Segmentation(5, {}), Segmentation(6, {}), 2), ArgumentError);
    CHECK_THROWS_AS(pk(Segmentation(5, {}), Segmentation(5, {}), 5), ArgumentError);
  }

  TEST_CASE("kappa and micro precision") {
    const ConfusionMatrix m({"A", "B"}, {{20, 5}, {10, 15}});
    // p_o = 35/50, p_e = 25/50 * 30/50 + 25/50 * 20/50 = 0.5.
    CHECK(*cohens_kappa(m) == doctest::Approx((0.7 - 0.5) / 0.5).epsilon(1e-14));
    CHECK(micro_precision(m) == doctest::Approx(0.7).epsilon(1e-15));

    const ConfusionMatrix diag({"A", "B", "C"}, {{5, 0, 0}, {0, 3, 0}, {0, 0, 9}});
    CHECK(*cohens_kappa(diag) == 1.0);
    CHECK(micro_precision(diag) == 1.0);
    const ConfusionMatrix uniform({"A", "B"}, {{4, 4}, {4, 4}});
    CHECK(*cohens_kappa(uniform) == doctest::Approx(0.0));
    const ConfusionMatrix off({"A", "B"}, {{0, 3}, {2, 0}});
    CHECK(micro_precision(off) == 0.0);
    CHECK_FALSE(cohens_kappa(ConfusionMatrix({"A", "B"}, {{7, 0}, {0, 0}})).has_value());
    CHECK_THROWS_AS(micro_precision(ConfusionMatrix({"A"}, {{0}})), ArgumentError);
    CHECK_THROWS_AS(ConfusionMatrix({"A", "A"}, {{1, 0}, {0, 1}}), ArgumentError);
    CHECK_THROWS_AS(ConfusionMatrix({"A", "B"}, {{1, 0}}), ArgumentError);
  }

  TEST_CASE("label merging") {
    const ConfusionMatrix diag({"Main", "Generic", "Static"}, {{5, 0, 0}, {0, 3, 0}, {0, 0, 9}});
    const auto merged_diag = merge_labels(diag, {"Generic", "Static"});
    CHECK(merged_diag.labels() == std::vector<std::string>{"Main", "Generic+Static"});
    CHECK(micro_precision(merged_diag) == 1.0);
    CHECK(merged_diag.total() == diag.total());

    const ConfusionMatrix confused({"Main", "Generic", "Static"}, {{10, 0, 0}, {0, 6, 4}, {0, 3, 7}});
    CHECK(micro_precision(confused) < 1.0);
    const auto merged = merge_labels(confused, {"Static", "Generic"}, "G/S");
    CHECK(merged.labels() == std::vector<std::string>{"Main", "G/S"});
    CHECK(merged.counts()[1][1] == 20);
    CHECK(merged.total() == confused.total());
    CHECK(micro_precision(merged) == 1.0);
    CHECK_THROWS_AS(merge_labels(confused, {"Main"}), ArgumentError);
    CHECK_THROWS_AS(merge_labels(confused, {"Main", "Opinion"}), ArgumentError);
  }
}
