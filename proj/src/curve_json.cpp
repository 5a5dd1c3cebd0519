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

#include "tempval/curve_json.hpp"

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "tempval/errors.hpp"

namespace tempval {

namespace {

std::vector<std::string> param_keys(Family family) {
  switch (family) {
    case Family::gaussian:
    case Family::log_normal: return {"mu", "sigma"};
    case Family::exponential: return {"lambda"};
    case Family::gamma: return {"shape", "scale"};
    case Family::skew_normal: return {"location", "scale", "skewness"};
  }
  return {};
}

double number_at(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(0, path, "missing field");
  if (!it->is_number()) throw DataError(0, path, "expected a number");
  return it->get<double>();
}

std::string string_at(const nlohmann::json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(0, key, "missing field");
  if (!it->is_string()) throw DataError(0, key, "expected a string");
  return it->get<std::string>();
}

}  // namespace

nlohmann::ordered_json params_to_json(const DistributionParams& params) {
  const auto keys = param_keys(family_of(params));
  const auto values = to_vector(params);
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < keys.size(); ++i) out[keys[i]] = values[i];
  return out;
}

DistributionParams params_from_json(Family family, const nlohmann::json& params) {
  if (!params.is_object()) throw DataError(0, "params", "expected an object");
  std::vector<double> values;
  for (const auto& key : param_keys(family)) values.push_back(number_at(params, key, "params." + key));
  auto out = from_vector(family, values);
  validate(out);
  return out;
}

nlohmann::ordered_json curve_to_json(const ValidityCurve& curve) {
  nlohmann::ordered_json doc;
  doc["family"] = std::string(family_name(curve.family()));
  doc["params"] = params_to_json(curve.params);
  doc["amplitude"] = curve.scale;
  doc["log_base"] = curve.base.value();
  doc["normalization"] = std::string(normalization_name(curve.normalization));
  doc["domain"] = {{"min", curve.domain.lower},
                   {"max", curve.domain.upper},
                   {"grid_n", curve.domain.grid_n}};
  return doc;
}

ValidityCurve curve_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DataError(0, "", "curve must be a JSON object");
  const Family family = parse_family(string_at(doc, "family"));
  const auto params_it = doc.find("params");
  if (params_it == doc.end()) throw DataError(0, "params", "missing field");

  ValidityCurve curve;
  curve.params = params_from_json(family, *params_it);
  curve.scale = doc.contains("amplitude") ? number_at(doc, "amplitude", "amplitude") : 1.0;
  curve.base = LogBase(doc.contains("log_base") ? number_at(doc, "log_base", "log_base")
                                                : kDefaultLogBase);
  curve.normalization = doc.contains("normalization")
                            ? parse_normalization(string_at(doc, "normalization"))
                            : Normalization::raw;
  curve.domain = WorkingDomain::default_for(curve.base);
  if (const auto d = doc.find("domain"); d != doc.end()) {
    if (!d->is_object()) throw DataError(0, "domain", "expected an object");
    curve.domain.lower = number_at(*d, "min", "domain.min");
    curve.domain.upper = number_at(*d, "max", "domain.max");
    if (d->contains("grid_n")) {
      const auto& g = (*d)["grid_n"];
      if (!g.is_number_unsigned()) throw DataError(0, "domain.grid_n", "expected a positive integer");
      curve.domain.grid_n = g.get<std::size_t>();
    }
  }
  curve.validate();
  return curve;
}

ValidityCurve load_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(0, "", "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(0, "", std::string("malformed curve JSON: ") + e.what());
  }
  return curve_from_json(doc);
}

}  // namespace tempval
