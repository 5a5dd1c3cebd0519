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

// Reference computations for tests. Nothing here calls into the library.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
  const auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = simpson(lo, mid, flo, flm, fmid);
        const double right = simpson(mid, hi, fmid, frm, fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

// Composite integral over [a, b] split into `pieces` adaptive panels, for
// integrands concentrated in a small part of a long interval.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int pieces = 64) {
  double sum = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) sum += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol / pieces);
  return sum;
}

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Phi(z) = 1/2 + integral_0^z phi.
inline double normal_cdf_by_quadrature(double z) {
  const double half = adaptive_simpson(normal_pdf, 0.0, std::abs(z), 1e-14);
  return z >= 0.0 ? 0.5 + half : 0.5 - half;
}

inline double skew_normal_pdf(double x, double xi, double omega, double alpha) {
  const double z = (x - xi) / omega;
  return 2.0 / omega * normal_pdf(z) * 0.5 * (1.0 + std::erf(alpha * z / std::numbers::sqrt2));
}

// Pk counted from boundary positions: two units i and i + k share a segment
// exactly when no boundary lies in (i, i + k].
inline double pk_by_boundaries(std::size_t n, const std::vector<std::size_t>& ref,
                               const std::vector<std::size_t>& hyp, std::size_t k) {
  const auto split = [](const std::vector<std::size_t>& bounds, std::size_t i, std::size_t j) {
    for (std::size_t b : bounds) {
      if (b > i && b <= j) return true;
    }
    return false;
  };
  std::size_t bad = 0;
  for (std::size_t i = 0; i + k < n; ++i) bad += split(ref, i, i + k) != split(hyp, i, i + k);
  return static_cast<double>(bad) / static_cast<double>(n - k);
}

}  // namespace oracle
