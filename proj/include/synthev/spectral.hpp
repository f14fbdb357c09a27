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
#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"
#include "synthev/fft.hpp"
#include "synthev/image.hpp"

namespace synthev {

enum class SpectrumKind { kAmplitude, kPower };

// Square frequency-domain map with the DC bin at (size/2, size/2). Row index
// is vertical frequency, column index horizontal frequency.
struct SpectrumMap {
  int size = 0;
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::kAmplitude;
  bool log_scaled = false;

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * size + col];
  }
  int center() const { return size / 2; }

  friend bool operator==(const SpectrumMap&, const SpectrumMap&) = default;
};

namespace detail {

inline void check_spectral_input(const ImageBuffer& img) {
  if (img.channels() != 1) {
    fail(ErrorKind::kValidation, "spectrum: image must be grayscale");
  }
  if (!img.square() || img.width() % 2 != 0) {
    fail(ErrorKind::kValidation,
         "spectrum: image must be square with an even side");
  }
}

// |X|^p per bin, recentred so DC lands at (N/2, N/2).
inline std::vector<double> centered_magnitude(const ImageBuffer& img,
                                              bool squared) {
  check_spectral_input(img);
  const auto n = static_cast<std::size_t>(img.width());
  const auto spectrum = fft::forward_2d(img.pixels(), n, n);
  std::vector<double> out(n * n);
  const std::size_t half = n / 2;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      const auto& z = spectrum[v * n + u];
      const double mag = squared ? std::norm(z) : std::abs(z);
      out[((v + half) % n) * n + (u + half) % n] = mag;
    }
  }
  return out;
}

}  // namespace detail

// Amplitude |X| of the unnormalized forward DFT.
inline SpectrumMap fft2_amplitude(const ImageBuffer& img) {
  SpectrumMap map;
  map.size = img.width();
  map.values = detail::centered_magnitude(img, false);
  map.kind = SpectrumKind::kAmplitude;
  return map;
}

// |X|^2 / N^2, so that the bin sum equals the pixel sum of squares.
inline SpectrumMap power_spectrum(const ImageBuffer& img) {
  SpectrumMap map;
  map.size = img.width();
  map.values = detail::centered_magnitude(img, true);
  const double norm = static_cast<double>(map.size) * map.size;
  for (double& v : map.values) v /= norm;
  map.kind = SpectrumKind::kPower;
  return map;
}

inline SpectrumMap average_power_spectrum(const std::vector<ImageBuffer>& images) {
  require(!images.empty(), "average power spectrum: image list is empty");
  SpectrumMap mean;
  for (const auto& img : images) {
    if (!img.same_shape(images.front())) {
      fail(ErrorKind::kValidation,
           "average power spectrum: images differ in size");
    }
    const SpectrumMap one = power_spectrum(img);
    if (mean.values.empty()) {
      mean = one;
    } else {
      for (std::size_t i = 0; i < one.values.size(); ++i) {
        mean.values[i] += one.values[i];
      }
    }
  }
  const double count = static_cast<double>(images.size());
  for (double& v : mean.values) v /= count;
  return mean;
}

// Ray from the DC bin outward, N/2 samples, index 0 = DC. 0 degrees runs
// along +horizontal frequency; angles increase counterclockwise as displayed
// (toward decreasing row index). Only lattice-exact angles are supported.
inline std::vector<double> spectrum_slice(const SpectrumMap& spec,
                                          int angle_degrees) {
  int drow = 0;
  int dcol = 0;
  switch (angle_degrees) {
    case 0: dcol = 1; break;
    case 45: drow = -1; dcol = 1; break;
    case 90: drow = -1; break;
    case 135: drow = -1; dcol = -1; break;
    default:
      fail(ErrorKind::kValidation, "spectrum slice: unsupported angle " +
                                       std::to_string(angle_degrees) +
                                       " (use 0, 45, 90 or 135)");
  }
  require(spec.size >= 2 && spec.values.size() ==
                                static_cast<std::size_t>(spec.size) * spec.size,
          "spectrum slice: malformed spectrum");
  const int c = spec.center();
  std::vector<double> out(static_cast<std::size_t>(spec.size / 2));
  for (int i = 0; i < spec.size / 2; ++i) {
    out[static_cast<std::size_t>(i)] = spec.at(c + i * drow, c + i * dcol);
  }
  return out;
}

// Mean squared difference of log(1 + value) over all bins.
inline double spectral_divergence(const SpectrumMap& a, const SpectrumMap& b) {
  if (a.size != b.size || a.kind != b.kind ||
      a.values.size() != b.values.size()) {
    fail(ErrorKind::kValidation, "spectral divergence: spectra differ in shape");
  }
  require(!a.values.empty(), "spectral divergence: empty spectrum");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = std::log1p(a.values[i]) - std::log1p(b.values[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.values.size());
}

// Heatmap CSV: one row per spectrum row, log(1 + value) per cell.
inline void write_spectrum_csv(const std::filesystem::path& path,
                               const SpectrumMap& spec) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  for (int r = 0; r < spec.size; ++r) {
    for (int c = 0; c < spec.size; ++c) {
      if (c) out << ',';
      const double v = spec.at(r, c);
      out << csv::format_double(spec.log_scaled ? v : std::log1p(v));
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

// Slice CSV: `radius,deg0,deg45` (raw values, not log-scaled).
inline void write_slices_csv(const std::filesystem::path& path,
                             const SpectrumMap& spec,
                             const std::vector<int>& angles = {0, 45}) {
  std::vector<std::vector<double>> columns;
  for (int a : angles) columns.push_back(spectrum_slice(spec, a));
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << "radius";
  for (int a : angles) out << ",deg" << a;
  out << '\n';
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    out << i;
    for (const auto& col : columns) out << ',' << csv::format_double(col[i]);
    out << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace synthev
