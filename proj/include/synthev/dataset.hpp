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

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"
#include "synthev/image.hpp"
#include "synthev/png_io.hpp"

namespace synthev {

enum class Provenance { kReal, kSynthetic };

inline std::string_view to_string(Provenance p) {
  return p == Provenance::kReal ? "real" : "synthetic";
}

struct ManifestEntry {
  std::filesystem::path path;  // relative to the manifest root
  Provenance label = Provenance::kReal;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& entry) const {
    return entry.path.is_absolute() ? entry.path : root / entry.path;
  }

  std::vector<ManifestEntry> with_label(Provenance label) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
      if (e.label == label) out.push_back(e);
    }
    return out;
  }
};

// Parses a `path,label` CSV; paths resolve against the manifest's directory.
inline DatasetManifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kIo, "cannot open manifest " + file.string());

  DatasetManifest manifest;
  manifest.root = file.parent_path();
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (!header_seen) {
      if (cells.size() != 2 || cells[0] != "path" || cells[1] != "label") {
        fail(ErrorKind::kFormat, file.string() +
                                     ": manifest header must be 'path,label'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) {
      fail(ErrorKind::kFormat, file.string() + ": line " +
                                   std::to_string(line_no) +
                                   ": expected 2 cells");
    }
    ManifestEntry entry;
    entry.path = cells[0];
    if (cells[1] == "real") {
      entry.label = Provenance::kReal;
    } else if (cells[1] == "synthetic") {
      entry.label = Provenance::kSynthetic;
    } else {
      fail(ErrorKind::kFormat, file.string() + ": line " +
                                   std::to_string(line_no) +
                                   ": label must be 'real' or 'synthetic'");
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!header_seen) {
    fail(ErrorKind::kFormat, file.string() + ": empty manifest file");
  }
  return manifest;
}

inline void write_manifest(const std::filesystem::path& file,
                           const std::vector<ManifestEntry>& entries) {
  std::ofstream out(file);
  if (!out) fail(ErrorKind::kIo, "cannot write manifest " + file.string());
  out << "path,label\n";
  for (const auto& e : entries) {
    out << e.path.generic_string() << ',' << to_string(e.label) << '\n';
  }
}

// Loads every manifest entry as a target_size x target_size image, in
// manifest order.
inline std::vector<ImageBuffer> load_dataset(const DatasetManifest& manifest,
                                             int target_size, bool grayscale) {
  if (manifest.entries.empty()) {
    fail(ErrorKind::kValidation, "manifest has no entries");
  }
  require(target_size >= 8, "target size must be >= 8");
  std::vector<ImageBuffer> images;
  images.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) {
    ImageBuffer img = read_png(manifest.resolve(entry));
    img = grayscale ? to_grayscale(img) : to_rgb(img);
    images.push_back(resize_bilinear(img, target_size, target_size));
  }
  return images;
}

}  // namespace synthev
