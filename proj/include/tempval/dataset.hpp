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

// Annotated samples: loading from JSONL, target z-scoring, axis-stratified
// splitting and summary statistics.
//
// One JSON object per line:
//
//   {"id": "...", "parent_text": "...",
//    "axes": {"main": ["..."], "intention": [], "opinion": [], "hypothetical": [],
//             "negation": [], "generic": [], "static": [], "recurrent": []},
//    "target": {"location": 54.2, "scale": 11.5, "skewness": -0.3},
//    "log_base": 1.1}
//
// Axis entries may be absent, null, a string or a list of strings; absent and
// null mean "no subtexts". log_base is optional (default 1.1). Unknown
// top-level keys are ignored with a warning.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempval/distributions.hpp"

namespace tempval::data {

enum class Axis { main, intention, opinion, hypothetical, negation, generic, static_, recurrent };

inline constexpr std::array<Axis, 8> kAllAxes = {
    Axis::main,     Axis::intention, Axis::opinion, Axis::hypothetical,
    Axis::negation, Axis::generic,   Axis::static_, Axis::recurrent};

// Lowercase key used in JSON ("main", "static", ...).
std::string_view axis_key(Axis axis);
// Capitalized display name ("Main", "Static", ...).
std::string_view axis_label(Axis axis);
// Case-insensitive; accepts keys and display names.
std::optional<Axis> parse_axis(std::string_view name);

struct Sample {
  std::string id;
  std::string parent_text;
  std::array<std::vector<std::string>, 8> axes;  // kAllAxes order
  SkewNormalParams target;                       // log units of `log_base`
  double log_base = 1.1;

  const std::vector<std::string>& axis(Axis a) const {
    return axes[static_cast<std::size_t>(a)];
  }
  std::vector<std::string>& axis(Axis a) { return axes[static_cast<std::size_t>(a)]; }

  // Throws ArgumentError when the Main axis is empty or the target is invalid.
  void validate() const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Maps canonical field paths to the dotted paths used by a differently shaped
// source file. Canonical paths: id, parent_text, axes, axes.<axis key>,
// target, target.location, target.scale, target.skewness, log_base. Anything
// not mapped is read from its canonical location.
struct FieldMapping {
  std::map<std::string, std::string> source_of;

  // Reads a flat JSON object {"canonical.path": "source.path", ...}.
  static FieldMapping load(const std::filesystem::path& path);
  std::string resolve(const std::string& canonical) const;
};

struct LoadOptions {
  FieldMapping mapping;
  // Receives one message per distinct ignored key, when non-null.
  std::vector<std::string>* warnings = nullptr;
};

// Throws DataError naming the line and field of the first bad record.
std::vector<Sample> read_samples(std::istream& in, const LoadOptions& options = {});
std::vector<Sample> load_samples(const std::filesystem::path& path,
                                 const LoadOptions& options = {});

std::string to_json_line(const Sample& sample);
void write_samples(std::ostream& out, std::span<const Sample> samples);

// Per-parameter mean and standard deviation of (location, scale, skewness).
struct ZScoreStats {
  std::array<double, 3> mean{};
  std::array<double, 3> sd{};

  void validate() const;
};

// Sample standard deviation (n - 1). Throws ArgumentError with fewer than 2
// rows or a zero-variance parameter.
ZScoreStats zscore_fit(std::span<const std::array<double, 3>> targets);
ZScoreStats zscore_fit(std::span<const Sample> samples);
std::array<double, 3> zscore_apply(const ZScoreStats& stats, const std::array<double, 3>& v);
std::array<double, 3> zscore_apply(const ZScoreStats& stats, const SkewNormalParams& p);
// No validation of the result: inverted predictions may have scale <= 0.
SkewNormalParams zscore_invert(const ZScoreStats& stats, const std::array<double, 3>& z);

std::array<double, 3> as_triple(const SkewNormalParams& p);

struct SplitSpec {
  double train = 0.7;
  double validation = 0.2;
  double test = 0.1;
  std::uint64_t seed = 42;

  // Each ratio in (0, 1) and their sum within 1e-9 of 1.
  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

struct DatasetSplit {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
};

// Split sizes are the largest-remainder apportionment of the sample count;
// membership follows iterative multi-label stratification over axis presence
// (rarest axis first), with seeded tie breaking. Index lists are ascending.
// Throws ArgumentError when a split would be empty.
SplitIndices stratified_split_indices(std::span<const Sample> samples, const SplitSpec& spec);
DatasetSplit stratified_split(std::span<const Sample> samples, const SplitSpec& spec);

// Number of samples with a nonempty list per axis (kAllAxes order).
std::array<std::size_t, 8> axis_distribution(std::span<const Sample> samples);

// Whitespace-delimited token count.
std::size_t whitespace_tokens(std::string_view text);

}  // namespace tempval::data
