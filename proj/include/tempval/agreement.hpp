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

// Inter-annotator agreement: ICC for numeric targets, Jaccard for label sets,
// Pk for segmentations, and micro precision / Cohen's kappa over axis
// confusion matrices.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tempval::metrics {

// items x raters, no missing cells.
class RaterMatrix {
 public:
  // rows[i][j] is rater j's value for item i. Throws ArgumentError on ragged
  // rows, fewer than 2 raters, or non-finite values.
  explicit RaterMatrix(std::vector<std::vector<double>> rows);

  std::size_t items() const noexcept { return rows_.size(); }
  std::size_t raters() const noexcept { return raters_; }
  double at(std::size_t item, std::size_t rater) const { return rows_[item][rater]; }

 private:
  std::vector<std::vector<double>> rows_;
  std::size_t raters_ = 0;
};

enum class IccModel {
  two_way_random_absolute,    // ICC(2,1)
  two_way_mixed_consistency,  // ICC(3,1)
};

// Single-measure ICC from two-way ANOVA mean squares. Empty (degenerate) when
// the items show no between-item variance. Requires >= 2 items.
std::optional<double> icc(const RaterMatrix& m,
                          IccModel model = IccModel::two_way_random_absolute);

// |a & b| / |a | b|; two empty sets agree perfectly (1).
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Segmentation of a sequence of `length` units. A boundary at position p
// starts a new segment at unit p, so valid boundaries lie in [1, length - 1].
class Segmentation {
 public:
  // Throws ArgumentError unless boundaries are strictly increasing and in range.
  Segmentation(std::size_t length, std::vector<std::size_t> boundaries);

  std::size_t length() const noexcept { return length_; }
  const std::vector<std::size_t>& boundaries() const noexcept { return boundaries_; }
  std::size_t segment_count() const noexcept { return boundaries_.size() + 1; }
  // Segment index of every unit.
  std::vector<std::size_t> labels() const;

 private:
  std::size_t length_;
  std::vector<std::size_t> boundaries_;
};

// Half the mean reference segment length, rounded, at least 2.
std::size_t default_pk_window(const Segmentation& reference);

// Fraction of windows (i, i + k), i in [0, length - k), on which reference and
// hypothesis disagree about the two ends sharing a segment. Throws
// ArgumentError for mismatched lengths, k == 0, or length <= k.
double pk(const Segmentation& reference, const Segmentation& hypothesis,
          std::optional<std::size_t> window = std::nullopt);

// Square count matrix over named labels; rows are one annotator, columns the
// other.
class ConfusionMatrix {
 public:
  // Throws ArgumentError when the matrix is not square over the labels or a
  // label repeats.
  ConfusionMatrix(std::vector<std::string> labels,
                  std::vector<std::vector<std::uint64_t>> counts);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<std::uint64_t>>& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  // Throws ArgumentError for an unknown label.
  std::size_t index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

// trace / total. Throws ArgumentError when the matrix is empty.
double micro_precision(const ConfusionMatrix& c);

// (p_o - p_e) / (1 - p_e). Empty when p_e == 1. Throws ArgumentError when
// the matrix is empty.
std::optional<double> cohens_kappa(const ConfusionMatrix& c);

// Collapses `group` (>= 2 distinct known labels) into one label, summing the
// matching rows and columns. The merged label takes the position of the
// group's first member in label order; its name defaults to the member names
// joined by '+'.
ConfusionMatrix merge_labels(const ConfusionMatrix& c, const std::vector<std::string>& group,
                             const std::string& merged_name = "");

}  // namespace tempval::metrics
