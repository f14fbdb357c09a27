/* Copyright 2026 The synthev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "synthev/error.hpp"
#include "synthev/stats/results.hpp"

namespace synthev::stats {

namespace detail {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

}  // namespace detail

// Shapiro-Wilk W with Royston's (1992, 1995) coefficient and p-value
// approximations, valid for 3 <= n <= 5000.
inline TestResult shapiro_wilk(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3 || n > 5000) {
    fail(ErrorKind::kRange, "shapiro-wilk: sample size " + std::to_string(n) +
                                " outside [3, 5000]");
  }
  std::vector<double> x(values.begin(), values.end());
  for (double v : x) {
    require(std::isfinite(v), "shapiro-wilk: non-finite value");
  }
  std::sort(x.begin(), x.end());

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double range = x.back() - x.front();
  if (!(range > 0.0) || !(ss > 0.0)) {
    fail(ErrorKind::kDegenerate, "shapiro-wilk: sample has zero variance");
  }

  // Antisymmetric weights a_1..a_{n/2}.
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  const double an = static_cast<double>(n);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
  } else {
    static constexpr std::array<double, 6> c1 = {
        0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static constexpr std::array<double, 6> c2 = {
        0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    const boost::math::normal_distribution<double> unit;
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = boost::math::quantile(
          unit, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first = 1;
    double fac = 0.0;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  // Scale by the range before squaring to stay well conditioned.
  double b = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    b += a[i] * (x[n - 1 - i] - x[i]) / range;
  }
  const double w = std::min(1.0, b * b / (ss / (range * range)));

  double p = 1.0;
  if (n == 3) {
    const double pi6 = 6.0 / std::numbers::pi;
    const double stqr = std::numbers::pi / 3.0;  // asin(sqrt(3/4))
    p = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else if (w < 1.0) {
    const double w1 = std::log(1.0 - w);
    double y = w1;
    double mu = 0.0;
    double sigma = 1.0;
    bool underflow = false;
    if (n <= 11) {
      static constexpr std::array<double, 2> g = {-2.273, 0.459};
      static constexpr std::array<double, 4> c3 = {0.544, -0.39978, 0.025054,
                                                   -6.714e-4};
      static constexpr std::array<double, 4> c4 = {1.3822, -0.77857, 0.062767,
                                                   -0.0020322};
      const double gamma = detail::poly(g, an);
      if (w1 >= gamma) {
        underflow = true;
      } else {
        y = -std::log(gamma - w1);
        mu = detail::poly(c3, an);
        sigma = std::exp(detail::poly(c4, an));
      }
    } else {
      static constexpr std::array<double, 4> c5 = {-1.5861, -0.31082,
                                                   -0.083751, 0.0038915};
      static constexpr std::array<double, 3> c6 = {-0.4803, -0.082676,
                                                   0.0030302};
      const double ln = std::log(an);
      mu = detail::poly(c5, ln);
      sigma = std::exp(detail::poly(c6, ln));
    }
    p = underflow ? 0.0 : std::clamp(normal_sf((y - mu) / sigma), 0.0, 1.0);
  }

  TestResult result;
  result.statistic = w;
  result.p_value = p;
  result.method = "shapiro-wilk (royston)";
  result.details["n"] = an;
  return result;
}

}  // namespace synthev::stats
