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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "synthev/error.hpp"
#include "synthev/stats/results.hpp"

namespace synthev::stats {

// Above this n*m the exact null distribution is not enumerated.
inline constexpr std::size_t kMannWhitneyExactLimit = 400;

namespace detail {

// Number of arrangements with U = u for sample sizes (n, m), u = 0..n*m,
// via the recurrence c(n, m, u) = c(n-1, m, u-m) + c(n, m-1, u).
inline std::vector<double> mann_whitney_counts(std::size_t n, std::size_t m) {
  // table[j] holds the distribution for (i, j) while sweeping i upward.
  const std::size_t top = n * m;
  std::vector<std::vector<double>> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {1.0};  // i = 0: only U = 0
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = {1.0};
    for (std::size_t j = 1; j <= m; ++j) {
      std::vector<double> dist(i * j + 1, 0.0);
      // Largest of the pooled i+j values belongs to x: contributes j wins.
      for (std::size_t u = 0; u < prev[j].size(); ++u) dist[u + j] += prev[j][u];
      // Largest belongs to y: no extra wins.
      for (std::size_t u = 0; u < cur[j - 1].size(); ++u) dist[u] += cur[j - 1][u];
      cur[j] = std::move(dist);
    }
    std::swap(prev, cur);
  }
  auto out = prev[m];
  out.resize(top + 1, 0.0);
  return out;
}

}  // namespace detail

// Two-sided Mann-Whitney U test. The statistic is U_x: the number of pairs
// with x_i > y_j plus half the ties, computed from midranks.
inline TestResult mann_whitney_u(std::span<const double> x,
                                 std::span<const double> y) {
  require(!x.empty() && !y.empty(), "mann-whitney: samples must be non-empty");
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const std::size_t total = n + m;

  std::vector<std::pair<double, bool>> pooled;  // (value, from x)
  pooled.reserve(total);
  for (double v : x) pooled.emplace_back(v, true);
  for (double v : y) pooled.emplace_back(v, false);
  for (const auto& p : pooled) {
    require(std::isfinite(p.first), "mann-whitney: non-finite value");
  }
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_x = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool ties = false;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && pooled[j].first == pooled[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const auto t = static_cast<double>(j - i);
    if (j - i > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_x += midrank;
    }
    i = j;
  }

  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double u_x = rank_sum_x - dn * (dn + 1.0) / 2.0;
  const double u_y = dn * dm - u_x;
  const double mean_u = dn * dm / 2.0;

  TestResult result;
  result.statistic = u_x;
  result.details["u_y"] = u_y;
  result.details["n_x"] = dn;
  result.details["n_y"] = dm;

  if (!ties && n * m <= kMannWhitneyExactLimit) {
    const auto counts = detail::mann_whitney_counts(n, m);
    const double all = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto u = static_cast<std::size_t>(std::llround(u_x));
    double lower = 0.0;
    for (std::size_t k = 0; k <= u; ++k) lower += counts[k];
    double upper = 0.0;
    for (std::size_t k = u; k < counts.size(); ++k) upper += counts[k];
    result.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    result.method = "mann-whitney (exact)";
    return result;
  }

  const double variance =
      dn * dm / 12.0 *
      ((static_cast<double>(total) + 1.0) -
       tie_term / (static_cast<double>(total) * (static_cast<double>(total) - 1.0)));
  result.method = "mann-whitney (normal, tie and continuity corrected)";
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    result.details["z"] = 0.0;
    return result;
  }
  const double z = (std::abs(u_x - mean_u) - 0.5) / std::sqrt(variance);
  result.details["z"] = z;
  result.p_value = std::clamp(2.0 * normal_sf(z), 0.0, 1.0);
  return result;
}

}  // namespace synthev::stats
