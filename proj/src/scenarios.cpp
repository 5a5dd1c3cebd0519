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

#include "tempval/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace tempval {

const std::array<Scenario, 6>& reference_scenarios() {
  static const std::array<Scenario, 6> kScenarios = {{
      {"S1", "Early Onset", "He is making coffee for himself right now.",
       {{{14.91, 0.19}, {21.64, 0.41}, {27.64, 0.77}, {31.64, 0.41}, {34.91, 0.20}}}},
      {"S2", "Late Onset", "The movie is going to hit the theaters in a few weeks.",
       {{{93.75, 0.21}, {100.67, 0.80}, {106.57, 0.42}, {112.73, 0.20}, {98.0, 0.63}}}},
      {"S3", "Short Duration",
       "The site has been crashing for a few minutes as there is some server "
       "maintenance work going on.",
       {{{12.73, 0.21}, {28.19, 0.80}, {41.28, 0.20}, {32.19, 0.60}, {18.91, 0.40}}}},
      {"S4", "Long Duration", "The ruling government brings growth and progress.",
       {{{1.0, 0.05}, {130.38, 0.81}, {147.84, 0.21}, {111.29, 0.42}, {138.38, 0.60}}}},
      {"S5", "Rapid Rise, Slow Decay",
       "The advertisement's impact peaks immediately and lingers.",
       {{{42.73, 0.21}, {46.91, 0.40}, {53.10, 0.80}, {63.46, 0.56}, {81.83, 0.27}}}},
      {"S6", "Slow Rise, Rapid Decay",
       "The news slowly gains attention but quickly becomes outdated.",
       {{{43.28, 0.20}, {58.01, 0.40}, {76.92, 0.79}, {84.92, 0.40}, {88.92, 0.17}}}},
  }};
  return kScenarios;
}

double reference_rmse(std::size_t scenario, Family family) {
  // Columns: gaussian, exponential, log_normal, gamma, skew_normal.
  static constexpr double kTable[6][5] = {
      {0.0709, 0.2103, 0.0844, 0.0827, 0.0514},
      {0.0673, 0.2291, 0.0597, 0.0623, 0.0357},
      {0.0424, 0.2312, 0.0804, 0.0668, 0.0407},
      {0.0273, 0.2704, 0.0325, 0.0307, 0.0224},
      {0.1193, 0.2126, 0.0872, 0.0968, 0.0505},
      {0.0806, 0.2212, 0.0919, 0.0899, 0.0247},
  };
  return kTable[scenario][static_cast<std::size_t>(family)];
}

Family ScenarioRow::best() const {
  return std::min_element(cells.begin(), cells.end(),
                          [](const auto& a, const auto& b) { return a.fit.rmse < b.fit.rmse; })
      ->family;
}

Family ScenarioRow::worst() const {
  return std::max_element(cells.begin(), cells.end(),
                          [](const auto& a, const auto& b) { return a.fit.rmse < b.fit.rmse; })
      ->family;
}

std::vector<ScenarioRow> run_scenarios(const FitOptions& options, unsigned threads) {
  const auto& scenarios = reference_scenarios();
  const std::size_t families = kAllFamilies.size();
  const std::size_t total = scenarios.size() * families;

  std::vector<ScenarioRow> rows(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    rows[s].scenario = &scenarios[s];
    rows[s].cells.resize(families);
    for (std::size_t f = 0; f < families; ++f) rows[s].cells[f].family = kAllFamilies[f];
  }

  auto run_cell = [&](std::size_t job) {
    auto& cell = rows[job / families].cells[job % families];
    cell.fit = fit(scenarios[job / families].points, cell.family, options);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    for (std::size_t j = 0; j < total; ++j) run_cell(j);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(total);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, total); ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < total; j = next++) {
          try {
            run_cell(j);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace tempval
