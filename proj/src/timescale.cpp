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

#include "tempval/timescale.hpp"

#include <cmath>
#include <string>

#include "tempval/errors.hpp"

namespace tempval {

LogBase::LogBase(double b) : base_(b), ln_base_(std::log(b)) {
  if (!std::isfinite(b) || !(b > 1.0)) {
    throw ArgumentError("log base must be finite and > 1, got " + std::to_string(b));
  }
}

LogTime to_log(double minutes, LogBase base) {
  if (!std::isfinite(minutes)) throw ArgumentError("time must be finite");
  if (minutes < 1.0) throw DomainError("sub-minute time unsupported");
  return {std::log(minutes) / base.ln(), base};
}

double from_log(LogTime t) {
  if (!std::isfinite(t.value)) throw ArgumentError("log time must be finite");
  return std::exp(t.value * t.base.ln());
}

double conversion_factor(LogBase from, LogBase to) { return from.ln() / to.ln(); }

LogTime convert_log_value(LogTime t, LogBase to) {
  if (t.base == to) return t;
  return {conversion_factor(t.base, to) * t.value, to};
}

SkewNormalParams convert_params(const SkewNormalParams& params, LogBase from,
                                LogBase to) {
  params.validate();
  if (from == to) return params;
  const double r = conversion_factor(from, to);
  return {r * params.xi, r * params.omega, params.alpha};
}

CompressionRow compression_row(double minutes, LogBase base) {
  const LogTime lt = to_log(minutes, base);
  const double ratio = lt.value / minutes;
  return {minutes, lt.value, ratio, 100.0 * (1.0 - ratio)};
}

}  // namespace tempval
