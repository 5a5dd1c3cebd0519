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

#include "tempval/text_dedup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

#include "tempval/errors.hpp"

namespace tempval::data {

namespace {

double dot(const std::vector<std::pair<std::size_t, double>>& a,
           const std::vector<std::pair<std::size_t, double>>& b) {
  double sum = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine_of(const std::vector<std::pair<std::size_t, double>>& a,
                 const std::vector<std::pair<std::size_t, double>>& b) {
  const double na = dot(a, a);
  const double nb = dot(b, b);
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot(a, b) / std::sqrt(na * nb);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TfidfIndex::TfidfIndex(std::span<const std::string> texts) {
  std::unordered_map<std::string, std::size_t> vocabulary;
  std::vector<std::map<std::size_t, double>> term_counts(texts.size());
  for (std::size_t d = 0; d < texts.size(); ++d) {
    for (auto& token : tokenize(texts[d])) {
      const auto [it, inserted] = vocabulary.try_emplace(std::move(token), vocabulary.size());
      term_counts[d][it->second] += 1.0;
    }
  }
  std::vector<std::size_t> df(vocabulary.size(), 0);
  for (const auto& doc : term_counts) {
    for (const auto& [term, count] : doc) ++df[term];
  }

  const double n = static_cast<double>(texts.size());
  tfidf_.resize(texts.size());
  counts_.resize(texts.size());
  for (std::size_t d = 0; d < texts.size(); ++d) {
    for (const auto& [term, count] : term_counts[d]) {
      counts_[d].emplace_back(term, count);
      const double weight = count * std::log(n / static_cast<double>(df[term]));
      if (weight > 0.0) tfidf_[d].emplace_back(term, weight);
    }
  }
}

double TfidfIndex::cosine(std::size_t i, std::size_t j) const {
  if (tfidf_.at(i).empty() || tfidf_.at(j).empty()) return cosine_of(counts_[i], counts_[j]);
  return cosine_of(tfidf_[i], tfidf_[j]);
}

DedupReport tfidf_dedup(std::span<const std::string> texts, double threshold) {
  if (!std::isfinite(threshold) || !(threshold > 0.0) || threshold > 1.0) {
    throw ArgumentError("dedup threshold must lie in (0, 1]");
  }
  const TfidfIndex index(texts);
  std::vector<bool> removed(texts.size(), false);
  DedupReport report;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (std::size_t j = i + 1; j < texts.size(); ++j) {
      const double sim = index.cosine(i, j);
      if (sim > threshold) {
        report.pairs.push_back({i, j, sim});
        removed[j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!removed[i]) report.kept.push_back(i);
  }
  return report;
}

}  // namespace tempval::data
