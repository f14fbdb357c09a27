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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace synthev::stats {

// Outcome of a hypothesis test. `details` carries test-specific extras such
// as expected cell counts or the z score.
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<int> df;
  std::string method;
  std::map<std::string, double> details;
};

struct BootstrapResult {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  int resamples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const BootstrapResult&, const BootstrapResult&) = default;
};

// Upper tail of the standard normal.
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Survival function of chi-square with one degree of freedom.
inline double chi_square_sf_df1(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(0.5 * x));
}

}  // namespace synthev::stats
