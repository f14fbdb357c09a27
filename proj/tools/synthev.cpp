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
// synthev: command-line front end for the evaluation toolkit.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "synthev/csv.hpp"
#include "synthev/dataset.hpp"
#include "synthev/equivariance.hpp"
#include "synthev/error.hpp"
#include "synthev/pipeline.hpp"
#include "synthev/spectral.hpp"
#include "synthev/stats.hpp"
#include "synthev/turing.hpp"
#include "synthev/turing_http.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;
constexpr int kExitNumeric = 5;

int exit_code(synthev::ErrorKind kind) {
  using synthev::ErrorKind;
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kFormat: return kExitIo;
    case ErrorKind::kNumeric: return kExitNumeric;
    default: return kExitValidation;
  }
}

// One machine-readable line on stderr.
void report_error(std::string_view kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump()
            << std::endl;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv(synthev::kOutputDirEnv); env && *env) {
    return env;
  }
  return "synthev-out";
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthev: evaluate synthetic image corpora against real ones"};
  app.require_subcommand(1);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "full metric report");
  std::optional<std::string> config_path;
  std::optional<std::string> real_manifest, synth_manifest, real_features,
      synth_features, out_dir, eq_op, eq_rotation;
  std::optional<int> image_size, feature_dim, kid_block, eq_transforms,
      eq_max_translate;
  std::optional<std::uint64_t> seed, eq_seed;
  evaluate->add_option("--config", config_path, "JSON config file");
  evaluate->add_option("--real", real_manifest, "real manifest CSV");
  evaluate->add_option("--synth", synth_manifest, "synthetic manifest CSV");
  evaluate->add_option("--real-features", real_features, "precomputed real features CSV");
  evaluate->add_option("--synth-features", synth_features,
                       "precomputed synthetic features CSV");
  evaluate->add_option("--image-size", image_size, "standardized side (default 512)");
  evaluate->add_option("--feature-dim", feature_dim, "embedding dimension (default 192)");
  evaluate->add_option("--seed", seed, "embedding seed");
  evaluate->add_option("--kid-block-size", kid_block, "KID block size (default 100)");
  evaluate->add_option("--eq-op", eq_op, "identity | gamma:<g> | blur:<r> | mask-left-half");
  evaluate->add_option("--eq-transforms", eq_transforms, "transforms per image (default 64)");
  evaluate->add_option("--eq-max-translate", eq_max_translate, "max shift in pixels");
  evaluate->add_option("--eq-rotation", eq_rotation, "exact90 | any_angle");
  evaluate->add_option("--eq-seed", eq_seed, "transform sampling seed");
  evaluate->add_option("--out", out_dir, "output directory");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "statistics over a metric log");
  stats_cmd->require_subcommand(1);
  std::string series_path;
  double tail = 0.3;
  double head = 0.3;
  int resamples = 10000;
  double level = 0.95;
  std::uint64_t stats_seed = 0;
  std::optional<double> query;
  std::optional<double> shapiro_tail;
  const auto fraction = CLI::Validator(
      [](std::string& v) -> std::string {
        const auto f = synthev::csv::parse_double(v);
        return (f && *f > 0.0 && *f <= 1.0) ? "" : "fraction must be in (0, 1]";
      },
      "FRACTION");
  const auto open_unit = CLI::Validator(
      [](std::string& v) -> std::string {
        const auto f = synthev::csv::parse_double(v);
        return (f && *f > 0.0 && *f < 1.0) ? "" : "level must be in (0, 1)";
      },
      "LEVEL");

  auto* st_boot = stats_cmd->add_subcommand("bootstrap", "bootstrap CI of the tail mean");
  st_boot->add_option("series", series_path, "step,value CSV")->required();
  st_boot->add_option("--tail", tail, "trailing fraction (default 0.3)")->check(fraction);
  st_boot->add_option("--resamples", resamples, "resample count (default 10000)")
      ->check(CLI::Range(100, 100000000));
  st_boot->add_option("--level", level, "confidence level (default 0.95)")->check(open_unit);
  st_boot->add_option("--seed", stats_seed, "resampling seed");

  auto* st_shapiro = stats_cmd->add_subcommand("shapiro", "Shapiro-Wilk normality test");
  st_shapiro->add_option("series", series_path, "step,value CSV")->required();
  st_shapiro->add_option("--tail", shapiro_tail, "trailing fraction (default 1.0)")
      ->check(fraction);

  auto* st_mwu = stats_cmd->add_subcommand("mwu", "Mann-Whitney U, early vs late");
  st_mwu->add_option("series", series_path, "step,value CSV")->required();
  st_mwu->add_option("--head", head, "leading fraction (default 0.3)")->check(fraction);
  st_mwu->add_option("--tail", tail, "trailing fraction (default 0.3)")->check(fraction);

  auto* st_cdf = stats_cmd->add_subcommand("cdf", "ECDF percentile of a value");
  st_cdf->add_option("series", series_path, "step,value CSV")->required();
  st_cdf->add_option("--tail", tail, "trailing fraction (default 0.3)")->check(fraction);
  st_cdf->add_option("--query", query, "value to rank (default: last value)");

  // spectra
  auto* spectra = app.add_subcommand("spectra", "average power spectrum export");
  std::string spectra_manifest;
  int spectra_size = 512;
  std::optional<std::string> spectra_out;
  spectra->add_option("--manifest", spectra_manifest, "manifest CSV")->required();
  spectra->add_option("--size", spectra_size, "standardized side (default 512)");
  spectra->add_option("--out", spectra_out, "output directory");

  // eq
  auto* eq = app.add_subcommand("eq", "equivariance score of a built-in operator");
  std::string eq_manifest;
  std::string eq_family = "translation";
  std::string eq_operator = "identity";
  int eq_size = 512;
  synthev::EquivarianceConfig eq_cfg;
  std::string eq_set = "exact90";
  std::optional<int> eq_limit;
  eq->add_option("--manifest", eq_manifest, "manifest CSV")->required();
  eq->add_option("--op", eq_operator, "identity | gamma:<g> | blur:<r> | mask-left-half");
  eq->add_option("--family", eq_family, "translation | rotation");
  eq->add_option("--size", eq_size, "standardized side (default 512)");
  eq->add_option("--transforms", eq_cfg.num_transforms, "transforms per image (default 64)");
  eq->add_option("--max-translate", eq_limit, "max shift in pixels");
  eq->add_option("--rotation", eq_set, "exact90 | any_angle");
  eq->add_option("--seed", eq_cfg.seed, "sampling seed");
  eq->add_option("--cap", eq_cfg.psnr_cap_db, "PSNR cap in dB (default 100)");
  eq->add_flag("!--no-mask", eq_cfg.mask_central_disk, "disable the central-disk mask");

  // turing serve
  auto* turing = app.add_subcommand("turing", "human Turing test service");
  turing->require_subcommand(1);
  auto* serve = turing->add_subcommand("serve", "run the grading HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log_path = "turing-events.jsonl";
  std::optional<std::string> ui_dir;
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port");
  serve->add_option("--log", log_path, "append-only JSONL event log");
  serve->add_option("--ui-dir", ui_dir, "static files served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*evaluate) {
      synthev::EvalConfig cfg;
      if (config_path) cfg = synthev::read_config_file(*config_path);
      if (real_manifest) cfg.real_manifest = *real_manifest;
      if (synth_manifest) cfg.synth_manifest = *synth_manifest;
      if (real_features) cfg.real_features = *real_features;
      if (synth_features) cfg.synth_features = *synth_features;
      if (image_size) cfg.image_size = *image_size;
      if (feature_dim) cfg.feature_dim = *feature_dim;
      if (seed) cfg.seed = *seed;
      if (kid_block) cfg.kid_block_size = *kid_block;
      if (eq_op) cfg.eq_operator = *eq_op;
      if (eq_transforms) cfg.eq.num_transforms = *eq_transforms;
      if (eq_max_translate) cfg.eq.max_translate = *eq_max_translate;
      if (eq_rotation) cfg.eq.rotation_set = synthev::parse_rotation_set(*eq_rotation);
      if (eq_seed) cfg.eq.seed = *eq_seed;
      if (out_dir) cfg.outputs = *out_dir;
      if (cfg.outputs.empty()) cfg.outputs = default_output_dir();
      if (cfg.real_manifest.empty() || cfg.synth_manifest.empty()) {
        report_error("usage", "evaluate needs --real and --synth (or --config)");
        return kExitUsage;
      }
      print(synthev::evaluate(cfg).to_json());
    } else if (*stats_cmd) {
      const auto series = synthev::stats::read_series(series_path);
      if (*st_boot) {
        print(synthev::commands::bootstrap(series, {tail, resamples, level, stats_seed}));
      } else if (*st_shapiro) {
        print(synthev::commands::shapiro(series, shapiro_tail.value_or(1.0)));
      } else if (*st_mwu) {
        print(synthev::commands::mwu(series, head, tail));
      } else {
        print(synthev::commands::cdf(series, tail, query));
      }
    } else if (*spectra) {
      const auto manifest = synthev::read_manifest(spectra_manifest);
      const auto images = synthev::load_dataset(manifest, spectra_size, true);
      const auto spec = synthev::average_power_spectrum(images);
      const std::filesystem::path out =
          spectra_out ? std::filesystem::path(*spectra_out) : default_output_dir();
      std::filesystem::create_directories(out);
      synthev::write_atomically(out / "spectrum.csv", [&](const auto& p) {
        synthev::write_spectrum_csv(p, spec);
      });
      synthev::write_atomically(out / "slices.csv", [&](const auto& p) {
        synthev::write_slices_csv(p, spec, {0, 45, 90, 135});
      });
      print({{"command", "spectra"},
             {"images", images.size()},
             {"size", spec.size},
             {"heatmap", (out / "spectrum.csv").string()},
             {"slices", (out / "slices.csv").string()}});
    } else if (*eq) {
      synthev::TransformFamily family;
      if (eq_family == "translation") {
        family = synthev::TransformFamily::kTranslation;
      } else if (eq_family == "rotation") {
        family = synthev::TransformFamily::kRotation;
      } else {
        report_error("usage", "--family must be translation or rotation");
        return kExitUsage;
      }
      eq_cfg.rotation_set = synthev::parse_rotation_set(eq_set);
      eq_cfg.max_translate = eq_limit;
      const auto manifest = synthev::read_manifest(eq_manifest);
      const auto images = synthev::load_dataset(manifest, eq_size, false);
      const auto result = synthev::eq_evaluate(synthev::operators::parse(eq_operator),
                                               images, family, eq_cfg);
      print({{"command", "eq"},
             {"family", eq_family},
             {"operator", eq_operator},
             {"score_db", result.score_db},
             {"pooled_mse", result.pooled_mse},
             {"samples", result.samples}});
    } else if (*serve) {
      auto store = synthev::turing::SessionStore::replay(log_path);
      httplib::Server server;
      synthev::turing::mount_routes(server, store);
      if (ui_dir) server.set_mount_point("/", *ui_dir);
      std::cerr << "listening on " << host << ":" << port << std::endl;
      if (!server.listen(host, port)) {
        report_error("io", "cannot bind " + host + ":" + std::to_string(port));
        return kExitIo;
      }
    }
  } catch (const synthev::Error& e) {
    report_error(synthev::to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    report_error("io", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
