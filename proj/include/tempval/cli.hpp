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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tempval/fitting.hpp"

namespace tempval::cli {

enum class OutputFormat { csv, json };

// Settings shared by every subcommand. Loaded from an INI/TOML style
// `key = value` file given with --config; command-line flags win.
struct CliConfig {
  double log_base = kDefaultLogBase;
  std::optional<double> domain_min;  // default: WorkingDomain::default_for(log_base)
  std::optional<double> domain_max;
  std::size_t grid_n = 10001;
  std::vector<double> multistart_alphas = {-3.0, 0.0, 3.0};
  std::size_t max_evaluations = 10000;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 42;
  unsigned threads = 0;

  // Throws ArgumentError when a value breaks a module precondition.
  void validate() const;
  WorkingDomain domain() const;
  FitOptions fit_options() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// `args` excludes the program name. Returns one of the exit codes above.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tempval::cli
