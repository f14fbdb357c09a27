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

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"
#include "synthev/image.hpp"
#include "synthev/random.hpp"

namespace synthev {

// One row per image, one column per feature.
struct FeatureMatrix {
  Eigen::MatrixXd rows;
  std::string source_tag;

  Eigen::Index n() const { return rows.rows(); }
  Eigen::Index d() const { return rows.cols(); }

  void validate() const {
    require(n() >= 1 && d() >= 1, "feature matrix must be non-empty");
    require(rows.allFinite(), "feature matrix has non-finite entries");
  }
};

struct GaussianSummary {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::Index n = 0;

  Eigen::Index d() const { return mu.size(); }
};

// Raster side and pixel offset used by the projection embedder.
inline constexpr int kEmbedSide = 64;
inline constexpr int kEmbedInputDim = kEmbedSide * kEmbedSide;
inline constexpr double kEmbedCenter = 0.5;
inline constexpr int kDefaultFeatureDim = 192;

// d x 4096 Gaussian projection with entries N(0, 1/4096), drawn row by row.
inline Eigen::MatrixXd projection_matrix(int d, std::uint64_t seed) {
  Rng rng(seed);
  const double sd = 1.0 / std::sqrt(static_cast<double>(kEmbedInputDim));
  Eigen::MatrixXd proj(d, kEmbedInputDim);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < kEmbedInputDim; ++c) proj(r, c) = sd * rng.normal();
  }
  return proj;
}

// Flattened 64x64 luma raster, offset by the mid-range value 0.5.
inline Eigen::VectorXd embedding_input(const ImageBuffer& img) {
  const ImageBuffer small =
      resize_bilinear(to_grayscale(img), kEmbedSide, kEmbedSide);
  Eigen::VectorXd v(kEmbedInputDim);
  const auto px = small.pixels();
  for (int i = 0; i < kEmbedInputDim; ++i) v(i) = px[i] - kEmbedCenter;
  return v;
}

// Deterministic random-projection features. Stands in for a learned feature
// extractor; any externally computed embedding can replace it via
// read_features().
inline FeatureMatrix embed_dataset(const std::vector<ImageBuffer>& images,
                                   int d, std::uint64_t seed) {
  require(!images.empty(), "embed: image list is empty");
  require(d >= 2, "embed: dimension must be >= 2");
  const Eigen::MatrixXd proj = projection_matrix(d, seed);
  FeatureMatrix out;
  out.rows.resize(static_cast<Eigen::Index>(images.size()), d);
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.rows.row(static_cast<Eigen::Index>(i)) =
        (proj * embedding_input(images[i])).transpose();
  }
  out.source_tag = "random-projection:d=" + std::to_string(d) +
                   ":seed=" + std::to_string(seed);
  return out;
}

inline void write_features(const std::filesystem::path& path,
                           const FeatureMatrix& features) {
  features.validate();
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  for (Eigen::Index j = 0; j < features.d(); ++j) {
    out << (j ? ",f" : "f") << j;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < features.n(); ++i) {
    for (Eigen::Index j = 0; j < features.d(); ++j) {
      if (j) out << ',';
      out << csv::format_double(features.rows(i, j));
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

// Reads a feature CSV with header f0..f{d-1}. Data rows are numbered from 1
// in error messages.
inline FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorKind::kFormat, path.string() + ": missing header");
  }
  csv::strip_cr(line);
  const auto header = csv::split(line);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      fail(ErrorKind::kFormat,
           path.string() + ": header cell " + std::to_string(j) +
               " must be f" + std::to_string(j));
    }
  }
  const std::size_t d = header.size();
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    csv::strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto cells = csv::split(line);
    if (cells.size() != d) {
      fail(ErrorKind::kFormat, path.string() + ": row " + std::to_string(row) +
                                   " has " + std::to_string(cells.size()) +
                                   " cells, expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = csv::parse_double(cells[j]);
      if (!v || !std::isfinite(*v)) {
        fail(ErrorKind::kFormat, path.string() + ": row " +
                                     std::to_string(row) + " column " +
                                     std::to_string(j) + ": not a number");
      }
      values.push_back(*v);
    }
  }
  if (row == 0) fail(ErrorKind::kFormat, path.string() + ": no data rows");
  FeatureMatrix out;
  out.rows = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                            Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(row),
      static_cast<Eigen::Index>(d));
  out.source_tag = path.filename().string();
  return out;
}

// Column mean and unbiased covariance, symmetrized.
inline GaussianSummary gaussian_summary(const FeatureMatrix& features) {
  features.validate();
  if (features.n() < 2) {
    fail(ErrorKind::kInsufficientSamples,
         "gaussian summary needs at least 2 samples, got " +
             std::to_string(features.n()));
  }
  GaussianSummary s;
  s.n = features.n();
  s.mu = features.rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rows.rowwise() - s.mu.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(s.n - 1);
  s.sigma = 0.5 * (cov + cov.transpose());
  return s;
}

}  // namespace synthev
