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
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "synthev/error.hpp"

namespace synthev {

// Row-major raster with channel-interleaved samples normalized to [0, 1].
class ImageBuffer {
 public:
  ImageBuffer() = default;

  ImageBuffer(int width, int height, int channels, double fill = 0.0)
      : ImageBuffer(width, height, channels,
                    std::vector<double>(checked_size(width, height, channels),
                                        fill)) {}

  ImageBuffer(int width, int height, int channels, std::vector<double> pixels)
      : width_(width), height_(height), channels_(channels),
        pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height, channels)) {
      fail(ErrorKind::kValidation, "pixel count does not match " +
                                       std::to_string(width) + "x" +
                                       std::to_string(height) + "x" +
                                       std::to_string(channels));
    }
    for (double v : pixels_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        fail(ErrorKind::kValidation, "pixel value outside [0,1]");
      }
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return pixels_.empty(); }
  bool square() const noexcept { return width_ == height_; }

  std::span<const double> pixels() const noexcept { return pixels_; }

  double at(int x, int y, int c = 0) const {
    return pixels_[index(x, y, c)];
  }

  // Writes are clamped so the [0,1] invariant cannot be broken.
  void set(int x, int y, int c, double v) {
    pixels_[index(x, y, c)] = std::clamp(v, 0.0, 1.0);
  }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  static std::size_t checked_size(int width, int height, int channels) {
    if (width < 1 || height < 1) {
      fail(ErrorKind::kValidation, "image dimensions must be >= 1");
    }
    if (channels != 1 && channels != 3) {
      fail(ErrorKind::kValidation, "channels must be 1 or 3");
    }
    return static_cast<std::size_t>(width) * height * channels;
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> pixels_;
};

// ITU-R BT.601 luma.
inline ImageBuffer to_grayscale(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  std::vector<double> out(static_cast<std::size_t>(img.width()) *
                          img.height());
  const auto src = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                     0.114 * src[3 * i + 2];
    out[i] = std::clamp(v, 0.0, 1.0);
  }
  return ImageBuffer(img.width(), img.height(), 1, std::move(out));
}

inline ImageBuffer to_rgb(const ImageBuffer& img) {
  if (img.channels() == 3) return img;
  const auto src = img.pixels();
  std::vector<double> out(src.size() * 3);
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[3 * i] = out[3 * i + 1] = out[3 * i + 2] = src[i];
  }
  return ImageBuffer(img.width(), img.height(), 3, std::move(out));
}

namespace detail {

// Bilinear sample at continuous pixel coordinates; taps outside the raster
// contribute `fill`.
inline double bilinear_fill(const ImageBuffer& img, double x, double y, int c,
                            double fill) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  auto tap = [&](int xi, int yi) {
    if (xi < 0 || yi < 0 || xi >= img.width() || yi >= img.height()) {
      return fill;
    }
    return img.at(xi, yi, c);
  };
  const double top = (1.0 - ax) * tap(x0, y0) + ax * tap(x0 + 1, y0);
  const double bottom =
      (1.0 - ax) * tap(x0, y0 + 1) + ax * tap(x0 + 1, y0 + 1);
  return (1.0 - ay) * top + ay * bottom;
}

// Bilinear sample with edge clamping, used for resizing.
inline double bilinear_clamped(const ImageBuffer& img, double x, double y,
                               int c) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = (1.0 - ax) * img.at(x0, y0, c) + ax * img.at(x1, y0, c);
  const double bottom =
      (1.0 - ax) * img.at(x0, y1, c) + ax * img.at(x1, y1, c);
  return (1.0 - ay) * top + ay * bottom;
}

inline int wrap(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace detail

// Bilinear resize using pixel-center alignment. For an exact 2:1 reduction
// every output pixel is the mean of its 2x2 source block.
inline ImageBuffer resize_bilinear(const ImageBuffer& img, int width,
                                   int height) {
  if (img.width() == width && img.height() == height) return img;
  ImageBuffer out(width, height, img.channels());
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      for (int c = 0; c < img.channels(); ++c) {
        out.set(x, y, c, detail::bilinear_clamped(img, src_x, src_y, c));
      }
    }
  }
  return out;
}

struct TransformSpec {
  int translate_x = 0;
  int translate_y = 0;
  double rotate_degrees = 0.0;  // counterclockwise as displayed
  bool flip_horizontal = false;
  bool flip_vertical = false;
  double scale = 1.0;
  double gamma = 1.0;

  static TransformSpec identity() { return {}; }
  static TransformSpec translation(int dx, int dy) {
    TransformSpec spec;
    spec.translate_x = dx;
    spec.translate_y = dy;
    return spec;
  }
  static TransformSpec rotation(double degrees) {
    TransformSpec spec;
    spec.rotate_degrees = degrees;
    return spec;
  }

  void validate() const {
    require(std::isfinite(rotate_degrees) && std::isfinite(scale) &&
                std::isfinite(gamma),
            "transform fields must be finite");
    require(scale > 0.0, "transform scale must be > 0");
    require(gamma > 0.0, "transform gamma must be > 0");
  }
};

// Circular shift: output(x, y) = input(x - dx, y - dy), indices mod size.
inline ImageBuffer translate_circular(const ImageBuffer& img, int dx, int dy) {
  if (dx == 0 && dy == 0) return img;
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    const int sy = detail::wrap(y - dy, img.height());
    for (int x = 0; x < img.width(); ++x) {
      const int sx = detail::wrap(x - dx, img.width());
      for (int c = 0; c < img.channels(); ++c) {
        out.set(x, y, c, img.at(sx, sy, c));
      }
    }
  }
  return out;
}

inline ImageBuffer flip(const ImageBuffer& img, bool horizontal,
                        bool vertical) {
  if (!horizontal && !vertical) return img;
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    const int sy = vertical ? img.height() - 1 - y : y;
    for (int x = 0; x < img.width(); ++x) {
      const int sx = horizontal ? img.width() - 1 - x : x;
      for (int c = 0; c < img.channels(); ++c) {
        out.set(x, y, c, img.at(sx, sy, c));
      }
    }
  }
  return out;
}

// Rotation about the image center. Quarter turns on square images (and half
// turns on any image) are exact index permutations; everything else is
// bilinear with out-of-support samples filled by 0.
inline ImageBuffer rotate(const ImageBuffer& img, double degrees) {
  double turns = std::fmod(degrees, 360.0);
  if (turns < 0.0) turns += 360.0;
  if (turns == 0.0) return img;

  const int w = img.width();
  const int h = img.height();
  const bool quarter = turns == 90.0 || turns == 270.0;
  if (turns == 180.0 || (quarter && img.square())) {
    ImageBuffer out(w, h, img.channels());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int sx = 0;
        int sy = 0;
        if (turns == 90.0) {
          sx = w - 1 - y;
          sy = x;
        } else if (turns == 180.0) {
          sx = w - 1 - x;
          sy = h - 1 - y;
        } else {
          sx = y;
          sy = h - 1 - x;
        }
        for (int c = 0; c < img.channels(); ++c) {
          out.set(x, y, c, img.at(sx, sy, c));
        }
      }
    }
    return out;
  }

  const double theta = turns * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double cx = 0.5 * (w - 1);
  const double cy = 0.5 * (h - 1);
  ImageBuffer out(w, h, img.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double ox = x - cx;
      const double oy = y - cy;
      const double src_x = cs * ox - sn * oy + cx;
      const double src_y = sn * ox + cs * oy + cy;
      for (int c = 0; c < img.channels(); ++c) {
        out.set(x, y, c, detail::bilinear_fill(img, src_x, src_y, c, 0.0));
      }
    }
  }
  return out;
}

// Zoom about the image center; out-of-support samples are 0.
inline ImageBuffer scale_about_center(const ImageBuffer& img, double factor) {
  if (factor == 1.0) return img;
  const double cx = 0.5 * (img.width() - 1);
  const double cy = 0.5 * (img.height() - 1);
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double src_x = (x - cx) / factor + cx;
      const double src_y = (y - cy) / factor + cy;
      for (int c = 0; c < img.channels(); ++c) {
        out.set(x, y, c, detail::bilinear_fill(img, src_x, src_y, c, 0.0));
      }
    }
  }
  return out;
}

inline ImageBuffer apply_gamma(const ImageBuffer& img, double gamma) {
  if (gamma == 1.0) return img;
  std::vector<double> out(img.pixels().begin(), img.pixels().end());
  for (double& v : out) v = std::clamp(std::pow(v, gamma), 0.0, 1.0);
  return ImageBuffer(img.width(), img.height(), img.channels(),
                     std::move(out));
}

// Applies flips, scale, rotation, translation, then gamma. Output has the
// input's dimensions.
inline ImageBuffer apply_transform(const ImageBuffer& img,
                                   const TransformSpec& spec) {
  spec.validate();
  ImageBuffer out = flip(img, spec.flip_horizontal, spec.flip_vertical);
  out = scale_about_center(out, spec.scale);
  out = rotate(out, spec.rotate_degrees);
  out = translate_circular(out, spec.translate_x, spec.translate_y);
  return apply_gamma(out, spec.gamma);
}

inline double mean_squared_error(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) {
    fail(ErrorKind::kValidation, "psnr: image dimensions differ");
  }
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

inline constexpr double kDefaultPsnrCapDb = 100.0;

// PSNR for peak value 1 given a mean squared error, saturating at cap_db.
inline double psnr_from_mse(double mse, double cap_db = kDefaultPsnrCapDb) {
  require(cap_db > 0.0, "psnr cap must be > 0");
  if (mse <= 0.0) return cap_db;
  return std::min(cap_db, 10.0 * std::log10(1.0 / mse));
}

inline double psnr(const ImageBuffer& a, const ImageBuffer& b,
                   double cap_db = kDefaultPsnrCapDb) {
  return psnr_from_mse(mean_squared_error(a, b), cap_db);
}

}  // namespace synthev
