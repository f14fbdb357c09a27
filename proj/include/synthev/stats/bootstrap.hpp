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
#include <cstdint>
#include <span>
#include <vector>

#include "synthev/error.hpp"
#include "synthev/random.hpp"
#include "synthev/stats/results.hpp"

namespace synthev::stats {

// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
inline double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Percentile bootstrap interval for the mean. Resample r draws from its own
// substream derived from (seed, r), so results do not depend on evaluation
// order.
inline BootstrapResult bootstrap_mean_ci(std::span<const double> values,
                                         int resamples, double level,
                                         std::uint64_t seed) {
  require(!values.empty(), "bootstrap: values are empty");
  require(resamples >= 100, "bootstrap: need at least 100 resamples");
  require(level > 0.0 && level < 1.0, "bootstrap: level must be in (0, 1)");

  const std::size_t n = values.size();
  double total = 0.0;
  for (double v : values) total += v;

  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[rng.below(n)];
    means[static_cast<std::size_t>(r)] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  BootstrapResult result;
  result.mean = total / static_cast<double>(n);
  result.level = level;
  result.resamples = resamples;
  result.seed = seed;
  const double alpha = 1.0 - level;
  result.ci_low = sorted_quantile(means, alpha / 2.0);
  result.ci_high = sorted_quantile(means, 1.0 - alpha / 2.0);
  return result;
}

}  // namespace synthev::stats
