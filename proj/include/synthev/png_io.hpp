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

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "synthev/error.hpp"
#include "synthev/image.hpp"

namespace synthev {

inline std::vector<std::uint8_t> read_file_bytes(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Decodes an 8-bit gray or RGB PNG (palette and alpha variants are expanded
// or composited by libpng) into a normalized buffer, v/255 per sample.
inline ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes,
                              const std::string& origin = "<memory>") {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    fail(ErrorKind::kFormat,
         "cannot decode PNG " + origin + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    png_image_free(&image);
    fail(ErrorKind::kFormat,
         "cannot decode PNG " + origin + ": " + image.message);
  }
  std::vector<double> pixels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] / 255.0;
  return ImageBuffer(static_cast<int>(image.width),
                     static_cast<int>(image.height), channels,
                     std::move(pixels));
}

inline ImageBuffer read_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorKind::kIo, "no such image: " + path.string());
  }
  return decode_png(read_file_bytes(path), path.string());
}

// 8-bit encode, rounding each sample to the nearest of 256 levels.
inline std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  const auto src = img.pixels();
  std::vector<std::uint8_t> raw(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    raw[i] = static_cast<std::uint8_t>(std::lround(src[i] * 255.0));
  }

  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, raw.data(), 0,
                                       nullptr)) {
    fail(ErrorKind::kFormat, std::string("PNG encode failed: ") +
                                 image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0,
                                 nullptr)) {
    fail(ErrorKind::kFormat, std::string("PNG encode failed: ") +
                                 image.message);
  }
  out.resize(size);
  return out;
}

inline void write_png(const std::filesystem::path& path,
                      const ImageBuffer& img) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace synthev
