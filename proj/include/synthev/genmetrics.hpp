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
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synthev/embedding.hpp"
#include "synthev/error.hpp"
#include "synthev/random.hpp"

namespace synthev {

// Eigenvalues in [-kPsdTolerance, 0) are treated as roundoff and clamped.
inline constexpr double kPsdTolerance = 1e-8;

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psd_eigen(
    const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::kNumeric, std::string(what) + ": eigendecomposition failed");
  }
  if (eig.eigenvalues().size() > 0 &&
      eig.eigenvalues().minCoeff() < -kPsdTolerance) {
    fail(ErrorKind::kNumeric, std::string(what) +
                                  " is not positive semidefinite (eigenvalue " +
                                  std::to_string(eig.eigenvalues().minCoeff()) +
                                  ")");
  }
  return eig;
}

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
  const auto eig = psd_eigen(m, what);
  const Eigen::VectorXd root =
      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace detail

// Squared Frechet distance between two Gaussians:
//   |mu_a - mu_b|^2 + Tr(Sa + Sb - 2 (Sa^1/2 Sb Sa^1/2)^1/2).
// The symmetric form has the same trace as (Sa Sb)^1/2 and real eigenvalues.
inline double frechet_distance(const GaussianSummary& a,
                               const GaussianSummary& b) {
  if (a.d() != b.d() || a.sigma.rows() != a.d() || b.sigma.rows() != b.d()) {
    fail(ErrorKind::kValidation, "frechet distance: dimension mismatch (" +
                                     std::to_string(a.d()) + " vs " +
                                     std::to_string(b.d()) + ")");
  }
  if (!a.mu.allFinite() || !b.mu.allFinite() || !a.sigma.allFinite() ||
      !b.sigma.allFinite()) {
    fail(ErrorKind::kNumeric, "frechet distance: non-finite mean or covariance");
  }
  const Eigen::MatrixXd root_a = detail::psd_sqrt(a.sigma, "covariance a");
  detail::psd_eigen(b.sigma, "covariance b");
  Eigen::MatrixXd inner = root_a * b.sigma * root_a;
  inner = 0.5 * (inner + inner.transpose());
  const auto eig = detail::psd_eigen(inner, "covariance product");
  const double trace_root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double mean_term = (a.mu - b.mu).squaredNorm();
  const double result =
      mean_term + a.sigma.trace() + b.sigma.trace() - 2.0 * trace_root;
  return std::max(result, 0.0);
}

inline double fid(const FeatureMatrix& real, const FeatureMatrix& synth) {
  if (real.d() != synth.d()) {
    fail(ErrorKind::kValidation, "fid: feature dimensions differ");
  }
  return frechet_distance(gaussian_summary(real), gaussian_summary(synth));
}

struct KidConfig {
  int block_size = 100;
  int degree = 3;
  double coef = 1.0;
  // Shuffle rows before blocking; nullopt keeps input order.
  std::optional<std::uint64_t> shuffle_seed;
};

struct KidResult {
  double estimate = 0.0;
  double std_error = 0.0;
  int blocks = 0;
  int block_size = 0;
};

// Unbiased MMD^2 between two equally sized row blocks.
inline double mmd2_unbiased(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                            const KidConfig& cfg) {
  const Eigen::Index m = x.rows();
  const double d = static_cast<double>(x.cols());
  auto kernel_matrix = [&](const Eigen::MatrixXd& p,
                           const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
    Eigen::MatrixXd k = (p * q.transpose()).array() / d + cfg.coef;
    return k.array().pow(cfg.degree);
  };
  const Eigen::MatrixXd kxy = kernel_matrix(x, y);
  // Every term is offset by one reference kernel value; the offsets cancel
  // algebraically and identical inputs give exactly zero.
  const double ref = kxy(0, 0);
  const Eigen::MatrixXd kxx = kernel_matrix(x, x).array() - ref;
  const Eigen::MatrixXd kyy = kernel_matrix(y, y).array() - ref;
  const double sxy_raw = (kxy.array() - ref).sum();
  const double mm1 = static_cast<double>(m) * static_cast<double>(m - 1);
  const double sxx = (kxx.sum() - kxx.trace()) / mm1;
  const double syy = (kyy.sum() - kyy.trace()) / mm1;
  const double sxy = sxy_raw / (static_cast<double>(m) * m);
  return sxx + syy - 2.0 * sxy;
}

// Kernel Inception Distance: block-averaged unbiased MMD^2 under the cubic
// polynomial kernel. When either set is smaller than the block size a single
// block of min(n_real, n_synth) rows is used.
inline KidResult kid(const FeatureMatrix& real, const FeatureMatrix& synth,
                     const KidConfig& cfg = {}) {
  if (real.d() != synth.d()) {
    fail(ErrorKind::kValidation, "kid: feature dimensions differ");
  }
  require(cfg.block_size >= 2, "kid: block size must be >= 2");
  require(cfg.degree >= 1, "kid: kernel degree must be >= 1");
  real.validate();
  synth.validate();
  const Eigen::Index smaller = std::min(real.n(), synth.n());
  if (smaller < 2) {
    fail(ErrorKind::kInsufficientSamples,
         "kid needs at least 2 samples per set");
  }

  KidResult result;
  result.block_size =
      static_cast<int>(std::min<Eigen::Index>(cfg.block_size, smaller));
  result.blocks = static_cast<int>(smaller / result.block_size);

  // The permutation depends only on the set size and seed, never on which
  // argument the set was passed as.
  auto order = [&](Eigen::Index n) {
    if (cfg.shuffle_seed) {
      return seeded_permutation(static_cast<std::size_t>(n), *cfg.shuffle_seed);
    }
    std::vector<std::size_t> identity(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    return identity;
  };
  const auto real_order = order(real.n());
  const auto synth_order = order(synth.n());

  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(result.blocks));
  const Eigen::Index bs = result.block_size;
  Eigen::MatrixXd x(bs, real.d());
  Eigen::MatrixXd y(bs, synth.d());
  for (int b = 0; b < result.blocks; ++b) {
    for (Eigen::Index i = 0; i < bs; ++i) {
      const auto k = static_cast<std::size_t>(b * bs + i);
      x.row(i) = real.rows.row(static_cast<Eigen::Index>(real_order[k]));
      y.row(i) = synth.rows.row(static_cast<Eigen::Index>(synth_order[k]));
    }
    estimates.push_back(mmd2_unbiased(x, y, cfg));
  }

  double sum = 0.0;
  for (double e : estimates) sum += e;
  result.estimate = sum / static_cast<double>(estimates.size());
  if (estimates.size() > 1) {
    double ss = 0.0;
    for (double e : estimates) {
      ss += (e - result.estimate) * (e - result.estimate);
    }
    const double sd = std::sqrt(ss / static_cast<double>(estimates.size() - 1));
    result.std_error = sd / std::sqrt(static_cast<double>(estimates.size()));
  }
  return result;
}

}  // namespace synthev
