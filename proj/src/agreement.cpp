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

#include "tempval/agreement.hpp"

#include <algorithm>
#include <cmath>

#include "tempval/errors.hpp"

namespace tempval::metrics {

RaterMatrix::RaterMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ArgumentError("rater matrix has no items");
  raters_ = rows_.front().size();
  if (raters_ < 2) throw ArgumentError("rater matrix needs at least 2 raters");
  for (const auto& row : rows_) {
    if (row.size() != raters_) throw ArgumentError("rater matrix rows differ in length");
    for (double v : row) {
      if (!std::isfinite(v)) throw ArgumentError("rater matrix contains a non-finite value");
    }
  }
}

std::optional<double> icc(const RaterMatrix& m, IccModel model) {
  const std::size_t n = m.items();
  const std::size_t k = m.raters();
  if (n < 2) throw ArgumentError("ICC needs at least 2 items");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);

  double grand = 0.0;
  std::vector<double> item_mean(n, 0.0), rater_mean(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      item_mean[i] += m.at(i, j) / kd;
      rater_mean[j] += m.at(i, j) / nd;
      grand += m.at(i, j);
    }
  }
  grand /= nd * kd;

  double ss_items = 0.0, ss_raters = 0.0, ss_total = 0.0;
  for (double v : item_mean) ss_items += kd * (v - grand) * (v - grand);
  for (double v : rater_mean) ss_raters += nd * (v - grand) * (v - grand);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) ss_total += (m.at(i, j) - grand) * (m.at(i, j) - grand);
  }
  if (ss_total <= 0.0 || ss_items <= 1e-14 * ss_total) return std::nullopt;

  const double ss_error = std::max(0.0, ss_total - ss_items - ss_raters);
  const double ms_items = ss_items / (nd - 1.0);
  const double ms_raters = ss_raters / (kd - 1.0);
  const double ms_error = ss_error / ((nd - 1.0) * (kd - 1.0));

  double denom = ms_items + (kd - 1.0) * ms_error;
  if (model == IccModel::two_way_random_absolute) denom += kd * (ms_raters - ms_error) / nd;
  if (denom <= 0.0) return std::nullopt;
  return (ms_items - ms_error) / denom;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& s : a) common += b.count(s);
  const std::size_t joint = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(joint);
}

Segmentation::Segmentation(std::size_t length, std::vector<std::size_t> boundaries)
    : length_(length), boundaries_(std::move(boundaries)) {
  if (length_ == 0) throw ArgumentError("segmentation length must be positive");
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    const std::size_t b = boundaries_[i];
    if (b == 0 || b >= length_) {
      throw ArgumentError("segment boundary " + std::to_string(b) + " outside [1, length - 1]");
    }
    if (i > 0 && b <= boundaries_[i - 1]) {
      throw ArgumentError("segment boundaries must be strictly increasing");
    }
  }
}

std::vector<std::size_t> Segmentation::labels() const {
  std::vector<std::size_t> out(length_);
  std::size_t seg = 0, next = 0;
  for (std::size_t i = 0; i < length_; ++i) {
    if (next < boundaries_.size() && boundaries_[next] == i) {
      ++seg;
      ++next;
    }
    out[i] = seg;
  }
  return out;
}

std::size_t default_pk_window(const Segmentation& reference) {
  const double mean_len =
      static_cast<double>(reference.length()) / static_cast<double>(reference.segment_count());
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(mean_len / 2.0)));
}

double pk(const Segmentation& reference, const Segmentation& hypothesis,
          std::optional<std::size_t> window) {
  if (reference.length() != hypothesis.length()) {
    throw ArgumentError("segmentations cover sequences of different length");
  }
  const std::size_t k = window.value_or(default_pk_window(reference));
  const std::size_t n = reference.length();
  if (k == 0) throw ArgumentError("Pk window must be positive");
  if (n <= k) throw ArgumentError("sequence is not longer than the Pk window");

  const auto ref = reference.labels();
  const auto hyp = hypothesis.labels();
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i + k < n; ++i) {
    const bool ref_same = ref[i] == ref[i + k];
    const bool hyp_same = hyp[i] == hyp[i + k];
    disagreements += ref_same != hyp_same;
  }
  return static_cast<double>(disagreements) / static_cast<double>(n - k);
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels,
                                 std::vector<std::vector<std::uint64_t>> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.size() != labels_.size()) {
    throw ArgumentError("confusion matrix row count does not match its labels");
  }
  for (const auto& row : counts_) {
    if (row.size() != labels_.size()) throw ArgumentError("confusion matrix is not square");
  }
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("confusion matrix labels repeat");
  }
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts_) {
    for (auto v : row) t += v;
  }
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) t += counts_[i][i];
  return t;
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ArgumentError("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

double micro_precision(const ConfusionMatrix& c) {
  const auto total = c.total();
  if (total == 0) throw ArgumentError("confusion matrix is empty");
  return static_cast<double>(c.trace()) / static_cast<double>(total);
}

std::optional<double> cohens_kappa(const ConfusionMatrix& c) {
  const auto total = c.total();
  if (total == 0) throw ArgumentError("confusion matrix is empty");
  const double t = static_cast<double>(total);
  const auto& m = c.counts();
  double expected = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      row += static_cast<double>(m[i][j]);
      col += static_cast<double>(m[j][i]);
    }
    expected += (row / t) * (col / t);
  }
  const double observed = static_cast<double>(c.trace()) / t;
  if (expected >= 1.0) return std::nullopt;
  return (observed - expected) / (1.0 - expected);
}

ConfusionMatrix merge_labels(const ConfusionMatrix& c, const std::vector<std::string>& group,
                             const std::string& merged_name) {
  std::vector<std::size_t> members;
  for (const auto& label : group) members.push_back(c.index_of(label));
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.size() < 2) throw ArgumentError("merging needs at least 2 distinct labels");

  const std::size_t target = members.front();
  // Old index -> new index.
  std::vector<std::size_t> remap(c.size());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const bool member = std::binary_search(members.begin(), members.end(), i);
    if (member && i != target) continue;
    remap[i] = labels.size();
    labels.push_back(c.labels()[i]);
  }
  for (std::size_t i : members) remap[i] = remap[target];

  std::string name = merged_name;
  if (name.empty()) {
    for (std::size_t i : members) name += (name.empty() ? "" : "+") + c.labels()[i];
  }
  labels[remap[target]] = name;

  std::vector<std::vector<std::uint64_t>> counts(labels.size(),
                                                 std::vector<std::uint64_t>(labels.size(), 0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) counts[remap[i]][remap[j]] += c.counts()[i][j];
  }
  return ConfusionMatrix(std::move(labels), std::move(counts));
}

}  // namespace tempval::metrics
