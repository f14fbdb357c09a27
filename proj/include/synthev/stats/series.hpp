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
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"

namespace synthev::stats {

struct MetricPoint {
  std::int64_t step = 0;
  double value = 0.0;

  friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

// Ordered training-metric log, e.g. FID per evaluation round.
struct MetricSeries {
  std::vector<MetricPoint> points;
  std::string metric_name = "value";

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.value);
    return out;
  }

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      require(std::isfinite(points[i].value) && points[i].value >= 0.0,
              "metric values must be finite and >= 0");
      if (i > 0) {
        require(points[i].step > points[i - 1].step,
                "metric steps must be strictly increasing");
      }
    }
  }
};

// Reads a `step,value` CSV. Errors name the 1-based file line.
inline MetricSeries read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  MetricSeries series;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto where = [&] { return path.string() + ": line " + std::to_string(line_no); };
  while (std::getline(in, line)) {
    ++line_no;
    csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (!header_seen) {
      if (cells.size() != 2 || cells[0] != "step") {
        fail(ErrorKind::kFormat, where() + ": header must be 'step,value'");
      }
      series.metric_name = cells[1];
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) {
      fail(ErrorKind::kFormat, where() + ": expected 2 cells, got " +
                                   std::to_string(cells.size()));
    }
    const auto step = csv::parse_int(cells[0]);
    const auto value = csv::parse_double(cells[1]);
    if (!step) fail(ErrorKind::kFormat, where() + ": step is not an integer");
    if (!value || !std::isfinite(*value) || *value < 0.0) {
      fail(ErrorKind::kFormat, where() + ": value must be a finite number >= 0");
    }
    if (!series.points.empty() && *step <= series.points.back().step) {
      fail(ErrorKind::kFormat, where() + ": steps must be strictly increasing");
    }
    series.points.push_back({*step, *value});
  }
  if (!header_seen) fail(ErrorKind::kFormat, path.string() + ": empty file");
  return series;
}

inline void write_series(const std::filesystem::path& path,
                         const MetricSeries& series) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "step," << series.metric_name << '\n';
  for (const auto& p : series.points) {
    out << p.step << ',' << csv::format_double(p.value) << '\n';
  }
}

// Number of trailing points kept for a fraction: ceil(fraction * n), with a
// small relative slack so that products like 0.3 * 10 do not round up past
// the exact count.
inline std::size_t tail_count(std::size_t n, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, "tail fraction must be in (0, 1]");
  const double exact = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  return std::clamp<std::size_t>(k, 1, n);
}

inline MetricSeries tail_fraction(const MetricSeries& series, double fraction) {
  require(!series.empty(), "tail fraction: series is empty");
  const std::size_t k = tail_count(series.size(), fraction);
  MetricSeries out;
  out.metric_name = series.metric_name;
  out.points.assign(series.points.end() - static_cast<std::ptrdiff_t>(k),
                    series.points.end());
  return out;
}

// Leading counterpart of tail_fraction, same rounding rule.
inline MetricSeries head_fraction(const MetricSeries& series, double fraction) {
  require(!series.empty(), "head fraction: series is empty");
  const std::size_t k = tail_count(series.size(), fraction);
  MetricSeries out;
  out.metric_name = series.metric_name;
  out.points.assign(series.points.begin(),
                    series.points.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

// Right-continuous empirical CDF: #{v <= query} / n.
inline double ecdf_percentile(std::span<const double> values, double query) {
  require(!values.empty(), "ecdf: values are empty");
  const auto hits = std::count_if(values.begin(), values.end(),
                                  [query](double v) { return v <= query; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace synthev::stats
