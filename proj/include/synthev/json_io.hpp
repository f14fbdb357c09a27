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

#include <json.hpp>

#include <cmath>
#include <string>

#include "synthev/stats/chi_square.hpp"
#include "synthev/stats/results.hpp"

// JSON shapes shared by the CLI reports and the Turing service.
namespace synthev::stats {

// Non-finite doubles become null; JSON has no representation for them.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline void to_json(nlohmann::json& j, const TestResult& r) {
  j = nlohmann::json{{"method", r.method},
                     {"statistic", json_number(r.statistic)},
                     {"p_value", json_number(r.p_value)}};
  j["df"] = r.df ? nlohmann::json(*r.df) : nlohmann::json(nullptr);
  nlohmann::json details = nlohmann::json::object();
  for (const auto& [k, v] : r.details) details[k] = json_number(v);
  j["details"] = details;
}

inline void to_json(nlohmann::json& j, const BootstrapResult& r) {
  j = nlohmann::json{{"method", "bootstrap-percentile"},
                     {"mean", r.mean},
                     {"ci_low", r.ci_low},
                     {"ci_high", r.ci_high},
                     {"level", r.level},
                     {"resamples", r.resamples},
                     {"seed", r.seed}};
}

inline void to_json(nlohmann::json& j, const ContingencyTable2x2& t) {
  j = nlohmann::json{
      {"rows", {"real_images", "synthetic_images"}},
      {"columns", {"correct", "incorrect"}},
      {"counts",
       {{t.counts[0][0], t.counts[0][1]}, {t.counts[1][0], t.counts[1][1]}}},
      {"total", t.total()}};
}

inline void from_json(const nlohmann::json& j, ContingencyTable2x2& t) {
  const auto& c = j.at("counts");
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < 2; ++k) t.counts[r][k] = c.at(r).at(k).get<std::int64_t>();
  }
}

}  // namespace synthev::stats
