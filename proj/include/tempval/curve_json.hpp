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

// Curve files:
//
//   {"family": "skew_normal",
//    "params": {"location": 42.96, "scale": 5.0, "skewness": 0.0},
//    "amplitude": 1.0, "log_base": 1.1, "normalization": "auc_one",
//    "domain": {"min": 0, "max": 180, "grid_n": 10001}}
//
// Parameter keys per family: gaussian and log_normal {"mu", "sigma"},
// exponential {"lambda"}, gamma {"shape", "scale"}, skew_normal {"location",
// "scale", "skewness"}. "domain" is optional and defaults to
// WorkingDomain::default_for(log_base); log_base defaults to 1.1 and
// normalization to "raw".

#pragma once

#include <filesystem>

#include "json.hpp"
#include "tempval/curve.hpp"

namespace tempval {

nlohmann::ordered_json params_to_json(const DistributionParams& params);
DistributionParams params_from_json(Family family, const nlohmann::json& params);

nlohmann::ordered_json curve_to_json(const ValidityCurve& curve);
// Throws DataError on missing or mistyped fields, ArgumentError on invalid values.
ValidityCurve curve_from_json(const nlohmann::json& doc);

ValidityCurve load_curve(const std::filesystem::path& path);

}  // namespace tempval
