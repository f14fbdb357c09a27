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
#include <functional>
#include <span>
#include <vector>

#include "synthev/error.hpp"

namespace synthev::stats {

inline constexpr double kDefaultEmaBeta = 0.998;
inline constexpr double kDefaultR1Gamma = 8.0;
inline constexpr double kDefaultFdStep = 1e-4;

// beta * current + (1 - beta) * incoming, elementwise.
inline std::vector<double> ema_update(std::span<const double> current,
                                      std::span<const double> incoming,
                                      double beta = kDefaultEmaBeta) {
  require(current.size() == incoming.size(), "ema: length mismatch");
  require(beta >= 0.0 && beta <= 1.0, "ema: beta must be in [0, 1]");
  std::vector<double> out(current.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = beta * current[i] + (1.0 - beta) * incoming[i];
  }
  return out;
}

using ScalarField = std::function<double(std::span<const double>)>;

// R1 gradient penalty (gamma / 2) * E ||grad f(x)||^2 over the samples, with
// the gradient taken by central differences.
inline double r1_penalty(const ScalarField& field,
                         const std::vector<std::vector<double>>& samples,
                         double gamma = kDefaultR1Gamma,
                         double fd_step = kDefaultFdStep) {
  require(!samples.empty(), "r1: samples are empty");
  require(fd_step > 0.0 && std::isfinite(fd_step), "r1: fd_step must be > 0");
  require(std::isfinite(gamma), "r1: gamma must be finite");

  auto eval = [&](std::span<const double> x) {
    const double v = field(x);
    if (!std::isfinite(v)) {
      fail(ErrorKind::kNumeric, "r1: field returned a non-finite value");
    }
    return v;
  };

  double total = 0.0;
  std::vector<double> probe;
  for (const auto& x : samples) {
    probe = x;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + fd_step;
      const double up = eval(probe);
      probe[i] = x[i] - fd_step;
      const double down = eval(probe);
      probe[i] = x[i];
      const double g = (up - down) / (2.0 * fd_step);
      norm2 += g * g;
    }
    total += norm2;
  }
  return 0.5 * gamma * total / static_cast<double>(samples.size());
}

}  // namespace synthev::stats
