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
#include <string>
#include <vector>

#include "doctest.h"
#include "tempval/errors.hpp"
#include "tempval/text_dedup.hpp"

using namespace tempval;
using namespace tempval::data;

TEST_SUITE("text_dedup") {
  TEST_CASE("tokenizer") {
    CHECK(tokenize("The Ferry's  route, 2 stops!") ==
          std::vector<std::string>{"the", "ferry", "s", "route", "2", "stops"});
    CHECK(tokenize("").empty());
  }

  TEST_CASE("hand-computed tf-idf cosine") {
    const std::vector<std::string> texts = {"a b c", "a b d", "x y z"};
    // a, b: ln(3/2) each; c, d: ln 3.  cos = 2 ln(1.5)^2 / (2 ln(1.5)^2 + ln(3)^2).
    const double l15 = std::log(1.5), l3 = std::log(3.0);
    const double expected = 2 * l15 * l15 / (2 * l15 * l15 + l3 * l3);
    const TfidfIndex index(texts);
    CHECK(index.cosine(0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.214096).epsilon(1e-5));
    CHECK(index.cosine(0, 2) == 0.0);

    const auto report = tfidf_dedup(texts, 0.5);
    CHECK(report.kept == std::vector<std::size_t>{0, 1, 2});
    CHECK(report.pairs.empty());
    CHECK(tfidf_dedup(texts, 0.2).kept == std::vector<std::size_t>{0, 2});
  }

  TEST_CASE("identical and disjoint texts") {
    const std::vector<std::string> same = {"the park opens at noon", "The park opens at noon."};
    const auto report = tfidf_dedup(same, 0.7);
    CHECK(report.kept == std::vector<std::size_t>{0});
    REQUIRE(report.pairs.size() == 1);
    CHECK(report.pairs[0].similarity == doctest::Approx(1.0));

    const std::vector<std::string> disjoint = {"red fox", "blue whale"};
    CHECK(tfidf_dedup(disjoint, 0.7).kept.size() == 2);
  }

  TEST_CASE("threshold validation") {
    const std::vector<std::string> texts = {"a", "b"};
    CHECK_THROWS_AS(tfidf_dedup(texts, 0.0), ArgumentError);
    CHECK_THROWS_AS(tfidf_dedup(texts, 1.5), ArgumentError);
  }
}
