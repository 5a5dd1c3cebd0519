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

// Lexical near-duplicate filtering with TF-IDF cosine similarity.
//
// Tokens are maximal runs of ASCII alphanumerics, lowercased. A document's
// weight for term t is count(t) * ln(N / df(t)). When either vector of a pair
// is all zeros (every term it contains occurs in every document) the pair is
// compared on raw term counts instead, so identical texts always score 1.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tempval::data {

std::vector<std::string> tokenize(std::string_view text);

class TfidfIndex {
 public:
  explicit TfidfIndex(std::span<const std::string> texts);

  std::size_t size() const noexcept { return tfidf_.size(); }
  double cosine(std::size_t i, std::size_t j) const;

 private:
  using SparseVector = std::vector<std::pair<std::size_t, double>>;  // sorted by term id
  std::vector<SparseVector> tfidf_;
  std::vector<SparseVector> counts_;
};

struct DuplicatePair {
  std::size_t first = 0;   // earlier text, kept on its account
  std::size_t second = 0;  // later text, removed
  double similarity = 0.0;
};

struct DedupReport {
  std::vector<std::size_t> kept;  // ascending
  std::vector<DuplicatePair> pairs;
};

// Every pair whose similarity exceeds `threshold` removes its later-indexed
// text. Throws ArgumentError unless threshold is in (0, 1].
DedupReport tfidf_dedup(std::span<const std::string> texts, double threshold = 0.7);

}  // namespace tempval::data
