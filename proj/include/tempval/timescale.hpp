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

// Linear <-> logarithmic time. Linear time is elapsed minutes since
// publication; log time of base b is ln(t) / ln(b). One minute is the floor of
// the linear axis and maps to log value 0 in every base.

#pragma once

#include "tempval/distributions.hpp"

namespace tempval {

inline constexpr double kDefaultLogBase = 1.1;

class LogBase {
 public:
  LogBase() : LogBase(kDefaultLogBase) {}
  // Throws ArgumentError unless b is finite and > 1.
  explicit LogBase(double b);

  double value() const noexcept { return base_; }
  double ln() const noexcept { return ln_base_; }

  friend bool operator==(const LogBase& a, const LogBase& b) noexcept {
    return a.base_ == b.base_;
  }

 private:
  double base_;
  double ln_base_;
};

struct LogTime {
  double value = 0.0;
  LogBase base;
};

// Throws ArgumentError for non-finite t and DomainError for t < 1 minute.
LogTime to_log(double minutes, LogBase base = LogBase{});

// Inverse of to_log. Throws ArgumentError for a non-finite value.
double from_log(LogTime t);

// ln(from) / ln(to): multiply a log value in base `from` by this to express it
// in base `to`.
double conversion_factor(LogBase from, LogBase to);

// Same-base conversion returns the input unchanged.
LogTime convert_log_value(LogTime t, LogBase to);

// Rescales location and scale by conversion_factor(from, to); the shape is
// copied untouched.
SkewNormalParams convert_params(const SkewNormalParams& params, LogBase from,
                                LogBase to);

struct CompressionRow {
  double minutes = 0.0;
  double log_value = 0.0;
  double ratio = 0.0;    // log_value / minutes
  double percent = 0.0;  // 100 * (1 - ratio)
};

CompressionRow compression_row(double minutes, LogBase base);

}  // namespace tempval
