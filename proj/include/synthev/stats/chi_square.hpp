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
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "synthev/error.hpp"
#include "synthev/stats/results.hpp"

namespace synthev::stats {

// Rows: real images, synthetic images. Columns: correctly identified,
// incorrectly identified.
struct ContingencyTable2x2 {
  std::array<std::array<std::int64_t, 2>, 2> counts{};

  std::int64_t row_total(int r) const { return counts[r][0] + counts[r][1]; }
  std::int64_t col_total(int c) const { return counts[0][c] + counts[1][c]; }
  std::int64_t total() const { return row_total(0) + row_total(1); }

  ContingencyTable2x2 transposed() const {
    ContingencyTable2x2 t;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) t.counts[c][r] = counts[r][c];
    }
    return t;
  }

  ContingencyTable2x2& operator+=(const ContingencyTable2x2& other) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) counts[r][c] += other.counts[r][c];
    }
    return *this;
  }

  friend bool operator==(const ContingencyTable2x2&,
                         const ContingencyTable2x2&) = default;
};

// Pearson chi-square test of independence, df = 1. With `yates` each
// |O - E| is reduced by 0.5 (not below zero).
inline TestResult chi_square_2x2(const ContingencyTable2x2& table,
                                 bool yates = false) {
  for (const auto& row : table.counts) {
    for (auto v : row) require(v >= 0, "chi-square: counts must be >= 0");
  }
  require(table.total() >= 1, "chi-square: table is empty");
  for (int i = 0; i < 2; ++i) {
    if (table.row_total(i) == 0 || table.col_total(i) == 0) {
      fail(ErrorKind::kDegenerate, "chi-square: table has a zero marginal");
    }
  }

  const double n = static_cast<double>(table.total());
  TestResult result;
  double chi2 = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double expected = static_cast<double>(table.row_total(r)) *
                              static_cast<double>(table.col_total(c)) / n;
      double dev = std::abs(static_cast<double>(table.counts[r][c]) - expected);
      if (yates) dev = std::max(0.0, dev - 0.5);
      chi2 += dev * dev / expected;
      result.details["expected_" + std::to_string(r) + std::to_string(c)] =
          expected;
    }
  }
  result.statistic = chi2;
  result.p_value = chi_square_sf_df1(chi2);
  result.df = 1;
  result.method = yates ? "chi-square 2x2 (yates)" : "chi-square 2x2";
  return result;
}

}  // namespace synthev::stats
