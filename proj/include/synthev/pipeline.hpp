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

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "synthev/dataset.hpp"
#include "synthev/embedding.hpp"
#include "synthev/equivariance.hpp"
#include "synthev/error.hpp"
#include "synthev/genmetrics.hpp"
#include "synthev/json_io.hpp"
#include "synthev/spectral.hpp"
#include "synthev/stats.hpp"
#include "synthev/turing.hpp"

namespace synthev {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "SYNTHEV_OUTPUT_DIR";

struct EvalConfig {
  std::filesystem::path real_manifest;
  std::filesystem::path synth_manifest;
  // Optional precomputed embeddings; replace the built-in projection.
  std::optional<std::filesystem::path> real_features;
  std::optional<std::filesystem::path> synth_features;
  int image_size = 512;
  int feature_dim = kDefaultFeatureDim;
  std::uint64_t seed = 0;
  int kid_block_size = 100;
  std::string eq_operator = "identity";
  EquivarianceConfig eq;
  std::filesystem::path outputs;

  void validate() const {
    require(image_size >= 8, "image_size must be >= 8");
    require(image_size % 2 == 0, "image_size must be even for spectra");
    require(feature_dim >= 2, "feature_dim must be >= 2");
    require(kid_block_size >= 2, "kid_block_size must be >= 2");
    require(eq.num_transforms >= 1, "eq num_transforms must be >= 1");
    require(!outputs.empty(), "outputs directory is required");
  }
};

inline std::string_view to_string(RotationSet r) {
  return r == RotationSet::kExact90 ? "exact90" : "any_angle";
}

inline RotationSet parse_rotation_set(std::string_view s) {
  if (s == "exact90") return RotationSet::kExact90;
  if (s == "any_angle" || s == "any") return RotationSet::kAnyAngle;
  fail(ErrorKind::kValidation, "rotation set must be exact90 or any_angle");
}

// Everything that determines the report body; hashed for provenance.
inline nlohmann::json canonical_config(const EvalConfig& cfg) {
  nlohmann::json j = {
      {"real_manifest", cfg.real_manifest.generic_string()},
      {"synth_manifest", cfg.synth_manifest.generic_string()},
      {"image_size", cfg.image_size},
      {"feature_dim", cfg.feature_dim},
      {"seed", cfg.seed},
      {"kid_block_size", cfg.kid_block_size},
      {"eq",
       {{"operator", cfg.eq_operator},
        {"num_transforms", cfg.eq.num_transforms},
        {"max_translate", cfg.eq.max_translate
                              ? nlohmann::json(*cfg.eq.max_translate)
                              : nlohmann::json(nullptr)},
        {"rotation_set", std::string(to_string(cfg.eq.rotation_set))},
        {"seed", cfg.eq.seed},
        {"psnr_cap_db", cfg.eq.psnr_cap_db},
        {"mask_central_disk", cfg.eq.mask_central_disk}}}};
  j["real_features"] = cfg.real_features
                           ? nlohmann::json(cfg.real_features->generic_string())
                           : nlohmann::json(nullptr);
  j["synth_features"] = cfg.synth_features
                            ? nlohmann::json(cfg.synth_features->generic_string())
                            : nlohmann::json(nullptr);
  return j;
}

// Applies the keys present in a JSON config object onto `cfg`. Relative
// paths resolve against `base`.
inline void apply_config_json(EvalConfig& cfg, const nlohmann::json& j,
                              const std::filesystem::path& base) {
  require(j.is_object(), "config must be a JSON object");
  auto path_of = [&](const char* key) {
    std::filesystem::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  try {
    if (j.contains("real_manifest")) cfg.real_manifest = path_of("real_manifest");
    if (j.contains("synth_manifest")) cfg.synth_manifest = path_of("synth_manifest");
    if (j.contains("real_features")) cfg.real_features = path_of("real_features");
    if (j.contains("synth_features")) cfg.synth_features = path_of("synth_features");
    if (j.contains("outputs")) cfg.outputs = path_of("outputs");
    cfg.image_size = j.value("image_size", cfg.image_size);
    cfg.feature_dim = j.value("feature_dim", cfg.feature_dim);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.kid_block_size = j.value("kid_block_size", cfg.kid_block_size);
    if (j.contains("eq")) {
      const auto& e = j.at("eq");
      cfg.eq_operator = e.value("operator", cfg.eq_operator);
      cfg.eq.num_transforms = e.value("num_transforms", cfg.eq.num_transforms);
      if (e.contains("max_translate") && !e.at("max_translate").is_null()) {
        cfg.eq.max_translate = e.at("max_translate").get<int>();
      }
      if (e.contains("rotation_set")) {
        cfg.eq.rotation_set =
            parse_rotation_set(e.at("rotation_set").get<std::string>());
      }
      cfg.eq.seed = e.value("seed", cfg.eq.seed);
      cfg.eq.psnr_cap_db = e.value("psnr_cap_db", cfg.eq.psnr_cap_db);
      cfg.eq.mask_central_disk =
          e.value("mask_central_disk", cfg.eq.mask_central_disk);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kValidation, std::string("bad config: ") + e.what());
  }
}

inline EvalConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open config " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::kFormat, path.string() + ": invalid JSON");
  EvalConfig cfg;
  apply_config_json(cfg, j, path.parent_path());
  return cfg;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kHex[v & 0xf];
  return out;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes through a sibling temp file and renames it into place.
inline void write_atomically(
    const std::filesystem::path& target,
    const std::function<void(const std::filesystem::path&)>& writer) {
  auto tmp = target;
  tmp += ".tmp";
  writer(tmp);
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::kIo, "cannot move " + tmp.string() + " into place: " + ec.message());
}

inline void write_text_atomically(const std::filesystem::path& target,
                                  const std::string& text) {
  write_atomically(target, [&](const std::filesystem::path& tmp) {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    out << text;
    if (!out) fail(ErrorKind::kIo, "write failed: " + tmp.string());
  });
}

struct EvalReport {
  nlohmann::json body;        // reproducible part
  nlohmann::json provenance;  // config hash, version, timestamps

  nlohmann::json to_json() const {
    return {{"report", body}, {"provenance", provenance}};
  }
};

// load -> embed -> FID/KID -> EQ-T/EQ-R -> spectra -> divergence. Writes
// report.json, spectrum_{real,synth}.csv and slices_{real,synth}.csv into
// cfg.outputs.
inline EvalReport evaluate(const EvalConfig& cfg) {
  cfg.validate();
  const std::string started = utc_timestamp();

  const auto real_manifest = read_manifest(cfg.real_manifest);
  const auto synth_manifest = read_manifest(cfg.synth_manifest);
  const auto real_images = load_dataset(real_manifest, cfg.image_size, false);
  const auto synth_images = load_dataset(synth_manifest, cfg.image_size, false);

  const FeatureMatrix real_features =
      cfg.real_features ? read_features(*cfg.real_features)
                        : embed_dataset(real_images, cfg.feature_dim, cfg.seed);
  const FeatureMatrix synth_features =
      cfg.synth_features ? read_features(*cfg.synth_features)
                         : embed_dataset(synth_images, cfg.feature_dim, cfg.seed);

  const double fid_value = fid(real_features, synth_features);
  KidConfig kid_cfg;
  kid_cfg.block_size = cfg.kid_block_size;
  const KidResult kid_value = kid(real_features, synth_features, kid_cfg);

  const ImageOperator op = operators::parse(cfg.eq_operator);
  const auto eq_t =
      eq_evaluate(op, synth_images, TransformFamily::kTranslation, cfg.eq);
  const auto eq_r = eq_evaluate(op, synth_images, TransformFamily::kRotation, cfg.eq);

  auto gray = [](const std::vector<ImageBuffer>& images) {
    std::vector<ImageBuffer> out;
    out.reserve(images.size());
    for (const auto& img : images) out.push_back(to_grayscale(img));
    return out;
  };
  const SpectrumMap real_spec = average_power_spectrum(gray(real_images));
  const SpectrumMap synth_spec = average_power_spectrum(gray(synth_images));
  const double divergence = spectral_divergence(real_spec, synth_spec);

  EvalReport report;
  report.body = {
      {"fid", stats::json_number(fid_value)},
      {"kid",
       {{"estimate", kid_value.estimate},
        {"std_error", kid_value.std_error},
        {"blocks", kid_value.blocks},
        {"block_size", kid_value.block_size}}},
      {"eq_t", eq_t.score_db},
      {"eq_r", eq_r.score_db},
      {"spectral_divergence", divergence},
      {"counts", {{"real", real_images.size()}, {"synthetic", synth_images.size()}}},
      {"features",
       {{"real", real_features.source_tag},
        {"synthetic", synth_features.source_tag},
        {"dim", real_features.d()}}},
      {"eq_operator", cfg.eq_operator},
      {"image_size", cfg.image_size}};

  std::filesystem::create_directories(cfg.outputs);
  write_atomically(cfg.outputs / "spectrum_real.csv",
                   [&](const auto& p) { write_spectrum_csv(p, real_spec); });
  write_atomically(cfg.outputs / "spectrum_synth.csv",
                   [&](const auto& p) { write_spectrum_csv(p, synth_spec); });
  write_atomically(cfg.outputs / "slices_real.csv",
                   [&](const auto& p) { write_slices_csv(p, real_spec); });
  write_atomically(cfg.outputs / "slices_synth.csv",
                   [&](const auto& p) { write_slices_csv(p, synth_spec); });

  report.provenance = {
      {"config_hash", hex64(turing::fnv1a(canonical_config(cfg).dump()))},
      {"toolkit_version", kToolkitVersion},
      {"started_at", started},
      {"finished_at", utc_timestamp()}};
  write_text_atomically(cfg.outputs / "report.json",
                        report.to_json().dump(2) + "\n");
  return report;
}

// Stats commands over a metric log; each returns the JSON printed by the CLI.
namespace commands {

struct BootstrapOptions {
  double tail = 0.3;
  int resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

inline nlohmann::json bootstrap(const stats::MetricSeries& series,
                                const BootstrapOptions& opt) {
  const auto tail = stats::tail_fraction(series, opt.tail);
  const auto values = tail.values();
  const auto result =
      stats::bootstrap_mean_ci(values, opt.resamples, opt.level, opt.seed);
  const double final_value = series.points.back().value;
  return {{"command", "bootstrap"},
          {"metric", series.metric_name},
          {"tail_fraction", opt.tail},
          {"n", values.size()},
          {"result", result},
          {"final_value", final_value},
          {"final_below_ci", final_value < result.ci_low}};
}

inline nlohmann::json shapiro(const stats::MetricSeries& series, double tail) {
  const auto values = stats::tail_fraction(series, tail).values();
  return {{"command", "shapiro"},
          {"metric", series.metric_name},
          {"tail_fraction", tail},
          {"n", values.size()},
          {"result", stats::shapiro_wilk(values)}};
}

// Early window (leading `head` fraction) against late window (trailing
// `tail` fraction).
inline nlohmann::json mwu(const stats::MetricSeries& series, double head,
                          double tail) {
  const auto early = stats::head_fraction(series, head).values();
  const auto late = stats::tail_fraction(series, tail).values();
  return {{"command", "mwu"},
          {"metric", series.metric_name},
          {"head_fraction", head},
          {"tail_fraction", tail},
          {"n_early", early.size()},
          {"n_late", late.size()},
          {"result", stats::mann_whitney_u(early, late)}};
}

inline nlohmann::json cdf(const stats::MetricSeries& series, double tail,
                          std::optional<double> query) {
  require(!series.empty(), "cdf: series is empty");
  const auto values = stats::tail_fraction(series, tail).values();
  const double q = query.value_or(series.points.back().value);
  return {{"command", "cdf"},
          {"metric", series.metric_name},
          {"tail_fraction", tail},
          {"n", values.size()},
          {"query", q},
          {"percentile", stats::ecdf_percentile(values, q)}};
}

}  // namespace commands
}  // namespace synthev
