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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"
#include "synthev/image.hpp"
#include "synthev/random.hpp"

namespace synthev {

// Pure, dimension-preserving image-to-image map whose equivariance is measured.
using ImageOperator = std::function<ImageBuffer(const ImageBuffer&)>;

enum class TransformFamily { kTranslation, kRotation };
enum class RotationSet { kExact90, kAnyAngle };

struct EquivarianceConfig {
  int num_transforms = 64;
  std::optional<int> max_translate;  // default: image side / 8
  RotationSet rotation_set = RotationSet::kExact90;
  std::uint64_t seed = 0;
  double psnr_cap_db = kDefaultPsnrCapDb;
  bool mask_central_disk = true;  // rotation family only
};

// Transform draws are sequential from one stream, so a longer run extends a
// shorter one with the same seed.
inline std::vector<TransformSpec> sample_transforms(TransformFamily family,
                                                    int image_side,
                                                    const EquivarianceConfig& cfg) {
  require(cfg.num_transforms >= 1, "equivariance: num_transforms must be >= 1");
  Rng rng(cfg.seed);
  std::vector<TransformSpec> out;
  out.reserve(static_cast<std::size_t>(cfg.num_transforms));
  if (family == TransformFamily::kTranslation) {
    const int limit = cfg.max_translate.value_or(std::max(1, image_side / 8));
    require(limit >= 1 && limit < image_side,
            "equivariance: max_translate must be in [1, image side)");
    while (static_cast<int>(out.size()) < cfg.num_transforms) {
      const auto dx = static_cast<int>(rng.between(-limit, limit));
      const auto dy = static_cast<int>(rng.between(-limit, limit));
      if (dx == 0 && dy == 0) continue;
      out.push_back(TransformSpec::translation(dx, dy));
    }
  } else {
    for (int i = 0; i < cfg.num_transforms; ++i) {
      const double degrees = cfg.rotation_set == RotationSet::kExact90
                                 ? 90.0 * static_cast<double>(rng.between(1, 3))
                                 : 360.0 * rng.uniform();
      out.push_back(TransformSpec::rotation(degrees));
    }
  }
  return out;
}

// Pixels whose center lies inside the disk of radius (side - 1) / 2 - 1 about
// the image center; rotated content there never samples outside the raster.
inline std::vector<bool> central_disk_mask(int side) {
  const double c = 0.5 * (side - 1);
  const double r = c - 1.0;
  std::vector<bool> mask(static_cast<std::size_t>(side) * side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double dx = x - c;
      const double dy = y - c;
      mask[static_cast<std::size_t>(y) * side + x] = dx * dx + dy * dy <= r * r;
    }
  }
  return mask;
}

struct EquivarianceResult {
  double score_db = 0.0;
  double pooled_mse = 0.0;
  std::size_t samples = 0;  // squared-error terms pooled
};

// PSNR of the commutator residual op(t(img)) - t(op(img)), pooled over all
// images and sampled transforms before converting to decibels.
inline EquivarianceResult eq_evaluate(const ImageOperator& op,
                                      const std::vector<ImageBuffer>& images,
                                      TransformFamily family,
                                      const EquivarianceConfig& cfg) {
  require(!images.empty(), "equivariance: image list is empty");
  const int side = images.front().width();
  for (const auto& img : images) {
    if (!img.square() && family == TransformFamily::kRotation) {
      fail(ErrorKind::kValidation, "equivariance: rotation needs square images");
    }
    require(img.same_shape(images.front()),
            "equivariance: images must share one size");
  }
  require(images.front().square(), "equivariance: images must be square");

  const auto transforms = sample_transforms(family, side, cfg);
  const bool masked = family == TransformFamily::kRotation && cfg.mask_central_disk;
  const auto mask = masked ? central_disk_mask(side) : std::vector<bool>{};

  auto checked = [&](const ImageBuffer& in) {
    ImageBuffer out = op(in);
    if (!out.same_shape(in)) {
      fail(ErrorKind::kContract,
           "equivariance: operator changed the image dimensions");
    }
    return out;
  };

  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& img : images) {
    const ImageBuffer op_img = checked(img);
    for (const auto& t : transforms) {
      const ImageBuffer lhs = checked(apply_transform(img, t));
      const ImageBuffer rhs = apply_transform(op_img, t);
      const auto a = lhs.pixels();
      const auto b = rhs.pixels();
      const int ch = img.channels();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (masked && !mask[i / static_cast<std::size_t>(ch)]) continue;
        const double d = a[i] - b[i];
        sum += d * d;
        ++count;
      }
    }
  }
  if (count == 0) fail(ErrorKind::kValidation, "equivariance: empty mask");
  EquivarianceResult result;
  result.samples = count;
  result.pooled_mse = sum / static_cast<double>(count);
  result.score_db = psnr_from_mse(result.pooled_mse, cfg.psnr_cap_db);
  return result;
}

inline double eq_score(const ImageOperator& op,
                       const std::vector<ImageBuffer>& images,
                       TransformFamily family, const EquivarianceConfig& cfg) {
  return eq_evaluate(op, images, family, cfg).score_db;
}

// Built-in operators.
namespace operators {

inline ImageOperator identity() {
  return [](const ImageBuffer& img) { return img; };
}

inline ImageOperator gamma(double g) {
  require(std::isfinite(g) && g > 0.0, "gamma operator needs g > 0");
  return [g](const ImageBuffer& img) {
    std::vector<double> px(img.pixels().begin(), img.pixels().end());
    for (double& v : px) v = std::pow(v, g);
    return ImageBuffer(img.width(), img.height(), img.channels(), std::move(px));
  };
}

// (2r+1)^2 box filter with circular boundary handling.
inline ImageOperator box_blur(int radius) {
  require(radius >= 0, "blur radius must be >= 0");
  return [radius](const ImageBuffer& img) {
    const int w = img.width();
    const int h = img.height();
    const double norm = 1.0 / ((2.0 * radius + 1) * (2.0 * radius + 1));
    ImageBuffer out(w, h, img.channels());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < img.channels(); ++c) {
          double acc = 0.0;
          for (int dy = -radius; dy <= radius; ++dy) {
            const int sy = detail::wrap(y + dy, h);
            for (int dx = -radius; dx <= radius; ++dx) {
              acc += img.at(detail::wrap(x + dx, w), sy, c);
            }
          }
          out.set(x, y, c, acc * norm);
        }
      }
    }
    return out;
  };
}

// Zeroes the right half (columns x >= width / 2).
inline ImageOperator mask_left_half() {
  return [](const ImageBuffer& img) {
    ImageBuffer out = img;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = img.width() / 2; x < img.width(); ++x) {
        for (int c = 0; c < img.channels(); ++c) out.set(x, y, c, 0.0);
      }
    }
    return out;
  };
}

// Parses `identity`, `gamma:<g>`, `blur:<radius>` or `mask-left-half`.
inline ImageOperator parse(std::string_view name) {
  if (name == "identity") return identity();
  if (name == "mask-left-half") return mask_left_half();
  if (name.starts_with("gamma:")) {
    const auto g = csv::parse_double(name.substr(6));
    require(g.has_value(), "bad gamma operator: " + std::string(name));
    return gamma(*g);
  }
  if (name.starts_with("blur:")) {
    const auto r = csv::parse_int(name.substr(5));
    require(r.has_value(), "bad blur operator: " + std::string(name));
    return box_blur(static_cast<int>(*r));
  }
  fail(ErrorKind::kValidation, "unknown operator: " + std::string(name));
}

}  // namespace operators
}  // namespace synthev
