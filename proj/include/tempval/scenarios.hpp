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

// The six reference temporal scenarios (five annotation points each, base-1.1
// log time) and the published per-family RMSE for each of them.

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "tempval/distributions.hpp"
#include "tempval/fitting.hpp"

namespace tempval {

struct Scenario {
  std::string_view id;
  std::string_view name;
  std::string_view sentence;
  std::array<AnnotationPoint, 5> points;
};

const std::array<Scenario, 6>& reference_scenarios();

// Published RMSE, indexed [scenario][family] with families in kAllFamilies
// order.
double reference_rmse(std::size_t scenario, Family family);

struct ScenarioCell {
  Family family;
  FitResult fit;
};

struct ScenarioRow {
  const Scenario* scenario = nullptr;
  std::vector<ScenarioCell> cells;  // kAllFamilies order

  // Family with the lowest / highest RMSE in this row.
  Family best() const;
  Family worst() const;
};

// Fits every family to every scenario. Rows and cells run in parallel when
// threads != 1; results do not depend on the thread count.
std::vector<ScenarioRow> run_scenarios(const FitOptions& options = {}, unsigned threads = 0);

}  // namespace tempval
