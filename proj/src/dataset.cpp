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

#include "tempval/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tempval/errors.hpp"

namespace tempval::data {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 8> kAxisKeys = {
    "main", "intention", "opinion", "hypothetical", "negation", "generic", "static", "recurrent"};
constexpr std::array<std::string_view, 8> kAxisLabels = {
    "Main", "Intention", "Opinion", "Hypothetical", "Negation", "Generic", "Static", "Recurrent"};
constexpr std::array<std::string_view, 3> kTargetKeys = {"location", "scale", "skewness"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  return parts;
}

const json* lookup(const json& root, const std::string& path) {
  const json* node = &root;
  for (const auto& part : split_path(path)) {
    if (!node->is_object()) return nullptr;
    const auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

std::string parent_of(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? std::string() : path.substr(0, dot);
}

std::string leaf_of(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? path : path.substr(dot + 1);
}

std::string first_segment(const std::string& path) { return path.substr(0, path.find('.')); }

class RecordReader {
 public:
  RecordReader(const LoadOptions& options) : options_(options) {
    axes_path_ = options.mapping.resolve("axes");
    for (std::size_t a = 0; a < kAxisKeys.size(); ++a) {
      const std::string canonical = "axes." + std::string(kAxisKeys[a]);
      axis_paths_[a] = options.mapping.source_of.count(canonical)
                           ? options.mapping.resolve(canonical)
                           : axes_path_ + "." + std::string(kAxisKeys[a]);
      if (parent_of(axis_paths_[a]) == axes_path_) accepted_axis_keys_.insert(leaf_of(axis_paths_[a]));
    }
    const std::string target_path = options.mapping.resolve("target");
    for (std::size_t t = 0; t < kTargetKeys.size(); ++t) {
      const std::string canonical = "target." + std::string(kTargetKeys[t]);
      target_paths_[t] = options.mapping.source_of.count(canonical)
                             ? options.mapping.resolve(canonical)
                             : target_path + "." + std::string(kTargetKeys[t]);
    }
    id_path_ = options.mapping.resolve("id");
    text_path_ = options.mapping.resolve("parent_text");
    base_path_ = options.mapping.resolve("log_base");
    for (const auto* p : {&axes_path_, &id_path_, &text_path_, &base_path_}) {
      known_top_.insert(first_segment(*p));
    }
    for (const auto& p : axis_paths_) known_top_.insert(first_segment(p));
    for (const auto& p : target_paths_) known_top_.insert(first_segment(p));
  }

  Sample read(const json& record, std::size_t line) {
    if (!record.is_object()) throw DataError(line, "", "record is not a JSON object");
    for (const auto& item : record.items()) {
      if (!known_top_.count(item.key()) && warned_.insert(item.key()).second &&
          options_.warnings != nullptr) {
        options_.warnings->push_back("line " + std::to_string(line) + ": ignoring unknown key '" +
                                     item.key() + "'");
      }
    }

    Sample s;
    s.id = read_id(record, line);
    const json* text = lookup(record, text_path_);
    if (text == nullptr) throw DataError(line, text_path_, "missing field");
    if (!text->is_string()) throw DataError(line, text_path_, "expected a string");
    s.parent_text = text->get<std::string>();

    const json* axes = lookup(record, axes_path_);
    if (axes != nullptr && !axes->is_object()) throw DataError(line, axes_path_, "expected an object");
    if (axes != nullptr) {
      for (const auto& item : axes->items()) {
        if (!accepted_axis_keys_.count(item.key())) {
          throw DataError(line, axes_path_ + "." + item.key(), "unknown axis name");
        }
      }
    }
    for (std::size_t a = 0; a < kAxisKeys.size(); ++a) {
      s.axes[a] = read_axis(record, axis_paths_[a], line);
    }
    if (s.axes[0].empty()) throw DataError(line, axis_paths_[0], "Main axis must be nonempty");

    double target[3];
    for (std::size_t t = 0; t < 3; ++t) {
      const json* v = lookup(record, target_paths_[t]);
      if (v == nullptr) throw DataError(line, target_paths_[t], "missing field");
      if (!v->is_number()) throw DataError(line, target_paths_[t], "expected a number");
      target[t] = v->get<double>();
      if (!std::isfinite(target[t])) throw DataError(line, target_paths_[t], "must be finite");
    }
    if (!(target[1] > 0.0)) throw DataError(line, target_paths_[1], "scale must be > 0");
    s.target = {target[0], target[1], target[2]};

    if (const json* base = lookup(record, base_path_); base != nullptr && !base->is_null()) {
      if (!base->is_number()) throw DataError(line, base_path_, "expected a number");
      s.log_base = base->get<double>();
      if (!std::isfinite(s.log_base) || !(s.log_base > 1.0)) {
        throw DataError(line, base_path_, "log base must be > 1");
      }
    }
    return s;
  }

 private:
  std::string read_id(const json& record, std::size_t line) const {
    const json* id = lookup(record, id_path_);
    if (id == nullptr) throw DataError(line, id_path_, "missing field");
    if (id->is_string()) return id->get<std::string>();
    if (id->is_number_integer()) return std::to_string(id->get<long long>());
    throw DataError(line, id_path_, "expected a string or integer");
  }

  static std::vector<std::string> read_axis(const json& record, const std::string& path,
                                            std::size_t line) {
    const json* v = lookup(record, path);
    if (v == nullptr || v->is_null()) return {};
    if (v->is_string()) {
      auto text = v->get<std::string>();
      if (text.empty()) return {};
      return {std::move(text)};
    }
    if (!v->is_array()) throw DataError(line, path, "expected a list of strings");
    std::vector<std::string> out;
    for (const auto& item : *v) {
      if (!item.is_string()) throw DataError(line, path, "expected a list of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  const LoadOptions& options_;
  std::string axes_path_, id_path_, text_path_, base_path_;
  std::array<std::string, 8> axis_paths_;
  std::array<std::string, 3> target_paths_;
  std::set<std::string> accepted_axis_keys_;
  std::set<std::string> known_top_;
  std::set<std::string> warned_;
};

}  // namespace

std::string_view axis_key(Axis axis) { return kAxisKeys[static_cast<std::size_t>(axis)]; }

std::string_view axis_label(Axis axis) { return kAxisLabels[static_cast<std::size_t>(axis)]; }

std::optional<Axis> parse_axis(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t a = 0; a < kAxisKeys.size(); ++a) {
    if (key == kAxisKeys[a]) return kAllAxes[a];
  }
  return std::nullopt;
}

void Sample::validate() const {
  if (axis(Axis::main).empty()) throw ArgumentError("sample '" + id + "' has an empty Main axis");
  target.validate();
  if (!std::isfinite(log_base) || !(log_base > 1.0)) {
    throw ArgumentError("sample '" + id + "' has an invalid log base");
  }
}

FieldMapping FieldMapping::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(0, "", "cannot open field mapping " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(0, "", "malformed field mapping: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw DataError(0, "", "field mapping must be a JSON object");
  FieldMapping m;
  for (const auto& item : doc.items()) {
    if (!item.value().is_string()) throw DataError(0, item.key(), "mapping target must be a string");
    m.source_of[item.key()] = item.value().get<std::string>();
  }
  return m;
}

std::string FieldMapping::resolve(const std::string& canonical) const {
  const auto it = source_of.find(canonical);
  return it == source_of.end() ? canonical : it->second;
}

std::vector<Sample> read_samples(std::istream& in, const LoadOptions& options) {
  RecordReader reader(options);
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(line_no, "", std::string("malformed JSON: ") + e.what());
    }
    out.push_back(reader.read(record, line_no));
  }
  return out;
}

std::vector<Sample> load_samples(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(0, "", "cannot open " + path.string());
  return read_samples(in, options);
}

std::string to_json_line(const Sample& sample) {
  nlohmann::ordered_json record;
  record["id"] = sample.id;
  record["parent_text"] = sample.parent_text;
  nlohmann::ordered_json axes = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < kAxisKeys.size(); ++a) axes[std::string(kAxisKeys[a])] = sample.axes[a];
  record["axes"] = std::move(axes);
  record["target"] = {{"location", sample.target.xi},
                      {"scale", sample.target.omega},
                      {"skewness", sample.target.alpha}};
  record["log_base"] = sample.log_base;
  return record.dump();
}

void write_samples(std::ostream& out, std::span<const Sample> samples) {
  for (const auto& s : samples) out << to_json_line(s) << '\n';
}

void ZScoreStats::validate() const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(mean[i]) || !std::isfinite(sd[i]) || !(sd[i] > 0.0)) {
      throw ArgumentError("z-score statistics need finite means and positive deviations");
    }
  }
}

ZScoreStats zscore_fit(std::span<const std::array<double, 3>> targets) {
  if (targets.size() < 2) throw ArgumentError("z-score fitting needs at least 2 rows");
  ZScoreStats stats;
  const double n = static_cast<double>(targets.size());
  for (std::size_t p = 0; p < 3; ++p) {
    double sum = 0.0;
    for (const auto& t : targets) sum += t[p];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : targets) ss += (t[p] - mean) * (t[p] - mean);
    stats.mean[p] = mean;
    stats.sd[p] = std::sqrt(ss / (n - 1.0));
    if (!(stats.sd[p] > 0.0)) {
      throw ArgumentError("target parameter " + std::string(kTargetKeys[p]) + " has zero variance");
    }
  }
  return stats;
}

std::array<double, 3> as_triple(const SkewNormalParams& p) { return {p.xi, p.omega, p.alpha}; }

ZScoreStats zscore_fit(std::span<const Sample> samples) {
  std::vector<std::array<double, 3>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(as_triple(s.target));
  return zscore_fit(rows);
}

std::array<double, 3> zscore_apply(const ZScoreStats& stats, const std::array<double, 3>& v) {
  stats.validate();
  std::array<double, 3> z{};
  for (std::size_t p = 0; p < 3; ++p) z[p] = (v[p] - stats.mean[p]) / stats.sd[p];
  return z;
}

std::array<double, 3> zscore_apply(const ZScoreStats& stats, const SkewNormalParams& p) {
  return zscore_apply(stats, as_triple(p));
}

SkewNormalParams zscore_invert(const ZScoreStats& stats, const std::array<double, 3>& z) {
  stats.validate();
  return {z[0] * stats.sd[0] + stats.mean[0], z[1] * stats.sd[1] + stats.mean[1],
          z[2] * stats.sd[2] + stats.mean[2]};
}

void SplitSpec::validate() const {
  for (double r : {train, validation, test}) {
    if (!std::isfinite(r) || !(r > 0.0) || !(r < 1.0)) {
      throw ArgumentError("split ratios must each lie in (0, 1)");
    }
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw ArgumentError("split ratios must sum to 1");
  }
}

SplitIndices stratified_split_indices(std::span<const Sample> samples, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = samples.size();
  const std::array<double, 3> ratios = {spec.train, spec.validation, spec.test};

  // Largest-remainder apportionment of n into the three splits.
  std::array<std::size_t, 3> capacity{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t f = 0; f < 3; ++f) {
    const double quota = ratios[f] * static_cast<double>(n);
    capacity[f] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainder[f] = quota - static_cast<double>(capacity[f]);
    assigned += capacity[f];
  }
  std::array<std::size_t, 3> by_remainder = {0, 1, 2};
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++capacity[by_remainder[i % 3]];
  for (std::size_t c : capacity) {
    if (c == 0) throw ArgumentError("split ratios leave a split empty for this sample count");
  }

  constexpr std::size_t kLabels = kAllAxes.size();
  std::vector<std::array<bool, kLabels>> has(n);
  std::array<std::size_t, kLabels> remaining{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < kLabels; ++l) {
      has[i][l] = !samples[i].axes[l].empty();
      remaining[l] += has[i][l];
    }
  }
  std::array<std::array<double, kLabels>, 3> need{};
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t l = 0; l < kLabels; ++l) {
      need[f][l] = ratios[f] * static_cast<double>(remaining[l]);
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<int> fold_of(n, -1);
  auto place = [&](std::size_t i, std::size_t label, bool by_label) {
    std::array<std::size_t, 3> tied{};
    std::size_t tie_count = 0;
    for (std::size_t f = 0; f < 3; ++f) {
      if (capacity[f] == 0) continue;
      if (tie_count == 0) {
        tied[tie_count++] = f;
        continue;
      }
      const std::size_t g = tied[0];
      const double nf = by_label ? need[f][label] : 0.0;
      const double ng = by_label ? need[g][label] : 0.0;
      if (nf > ng || (nf == ng && capacity[f] > capacity[g])) {
        tie_count = 0;
        tied[tie_count++] = f;
      } else if (nf == ng && capacity[f] == capacity[g]) {
        tied[tie_count++] = f;
      }
    }
    const std::size_t f =
        tie_count == 1 ? tied[0]
                       : tied[std::uniform_int_distribution<std::size_t>(0, tie_count - 1)(rng)];
    fold_of[i] = static_cast<int>(f);
    --capacity[f];
    for (std::size_t l = 0; l < kLabels; ++l) {
      if (has[i][l]) {
        need[f][l] -= 1.0;
        --remaining[l];
      }
    }
  };

  while (true) {
    std::optional<std::size_t> label;
    for (std::size_t l = 0; l < kLabels; ++l) {
      if (remaining[l] > 0 && (!label || remaining[l] < remaining[*label])) label = l;
    }
    if (!label) break;
    for (std::size_t i : order) {
      if (fold_of[i] < 0 && has[i][*label]) place(i, *label, true);
    }
  }
  for (std::size_t i : order) {
    if (fold_of[i] < 0) place(i, 0, false);
  }

  SplitIndices out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = fold_of[i] == 0 ? out.train : fold_of[i] == 1 ? out.validation : out.test;
    dst.push_back(i);
  }
  return out;
}

DatasetSplit stratified_split(std::span<const Sample> samples, const SplitSpec& spec) {
  const SplitIndices idx = stratified_split_indices(samples, spec);
  DatasetSplit out;
  for (std::size_t i : idx.train) out.train.push_back(samples[i]);
  for (std::size_t i : idx.validation) out.validation.push_back(samples[i]);
  for (std::size_t i : idx.test) out.test.push_back(samples[i]);
  return out;
}

std::array<std::size_t, 8> axis_distribution(std::span<const Sample> samples) {
  std::array<std::size_t, 8> counts{};
  for (const auto& s : samples) {
    for (std::size_t a = 0; a < counts.size(); ++a) counts[a] += !s.axes[a].empty();
  }
  return counts;
}

std::size_t whitespace_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace tempval::data
