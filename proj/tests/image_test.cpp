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
#include "synthev/image.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "synthev/dataset.hpp"
#include "synthev/png_io.hpp"
#include "test_support.hpp"

namespace synthev {
namespace {

using testing::noise_image;
using testing::TempDir;

using testing::kind_of;

TEST(ImageBufferTest, RejectsOutOfRangeAndMisshapen) {
  EXPECT_EQ(kind_of([] { ImageBuffer(2, 2, 1, std::vector<double>{0, 0.5, 1.5, 0}); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { ImageBuffer(2, 2, 1, std::vector<double>{0, 0.5}); }),
            ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { ImageBuffer(0, 2, 1); }), ErrorKind::kValidation);
  EXPECT_EQ(kind_of([] { ImageBuffer(2, 2, 2); }), ErrorKind::kValidation);
}

TEST(TransformTest, IdentityIsBitExact) {
  Rng rng(1);
  const auto img = noise_image(17, 3, rng);
  EXPECT_EQ(apply_transform(img, TransformSpec::identity()), img);
}

TEST(TransformTest, ConstantImageInvariantUnderShift) {
  const auto img = testing::constant_image(12, 3, 0.37);
  EXPECT_EQ(apply_transform(img, TransformSpec::translation(7, -3)), img);
}

TEST(TransformTest, FlipIsAnInvolution) {
  Rng rng(2);
  const auto img = noise_image(9, 1, rng);
  TransformSpec h;
  h.flip_horizontal = true;
  TransformSpec v;
  v.flip_vertical = true;
  EXPECT_EQ(apply_transform(apply_transform(img, h), h), img);
  EXPECT_EQ(apply_transform(apply_transform(img, v), v), img);
  EXPECT_NE(apply_transform(img, h), img);
}

TEST(TransformTest, CircularShiftInvertsAndPreservesMultiset) {
  Rng rng(3);
  const auto img = noise_image(11, 3, rng);
  for (auto [dx, dy] : {std::pair{3, 4}, {-5, 2}, {13, -27}, {0, 1}}) {
    const auto moved = apply_transform(img, TransformSpec::translation(dx, dy));
    EXPECT_EQ(apply_transform(moved, TransformSpec::translation(-dx, -dy)), img);
    std::vector<double> a(img.pixels().begin(), img.pixels().end());
    std::vector<double> b(moved.pixels().begin(), moved.pixels().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(TransformTest, ShiftMovesPixelsInPositiveDirection) {
  ImageBuffer img(4, 3, 1);
  img.set(0, 0, 0, 1.0);
  const auto moved = translate_circular(img, 1, 2);
  EXPECT_EQ(moved.at(1, 2), 1.0);
  EXPECT_EQ(moved.at(0, 0), 0.0);
}

TEST(TransformTest, QuarterTurnsArePermutations) {
  Rng rng(4);
  const auto img = noise_image(7, 1, rng);
  const auto r90 = rotate(img, 90.0);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 7; ++x) EXPECT_EQ(r90.at(x, y), img.at(6 - y, x));
  }
  auto full = img;
  for (int i = 0; i < 4; ++i) full = rotate(full, 90.0);
  EXPECT_EQ(full, img);
  EXPECT_EQ(rotate(rotate(img, 90.0), 270.0), img);
  EXPECT_EQ(rotate(img, -90.0), rotate(img, 270.0));
}

TEST(TransformTest, BilinearRotationAgreesWithExactPathNearQuarterTurn) {
  Rng rng(5);
  const auto img = noise_image(8, 1, rng);
  const auto exact = rotate(img, 90.0);
  const auto resampled = rotate(img, 90.0 + 1e-10);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) EXPECT_NEAR(resampled.at(x, y), exact.at(x, y), 1e-9);
  }
}

TEST(TransformTest, GammaAndValidation) {
  const auto img = testing::constant_image(4, 1, 0.5);
  TransformSpec g;
  g.gamma = 2.0;
  EXPECT_DOUBLE_EQ(apply_transform(img, g).at(1, 1), 0.25);

  TransformSpec bad;
  bad.rotate_degrees = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(kind_of([&] { apply_transform(img, bad); }), ErrorKind::kValidation);
  bad = {};
  bad.scale = 0.0;
  EXPECT_EQ(kind_of([&] { apply_transform(img, bad); }), ErrorKind::kValidation);
  bad = {};
  bad.gamma = -1.0;
  EXPECT_EQ(kind_of([&] { apply_transform(img, bad); }), ErrorKind::kValidation);
}

TEST(TransformTest, PreservesDimensions) {
  Rng rng(6);
  const auto img = noise_image(10, 3, rng);
  TransformSpec spec;
  spec.translate_x = 3;
  spec.rotate_degrees = 33.0;
  spec.flip_horizontal = true;
  spec.scale = 1.3;
  spec.gamma = 0.8;
  const auto out = apply_transform(img, spec);
  EXPECT_TRUE(out.same_shape(img));
  for (double v : out.pixels()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(PsnrTest, Examples) {
  Rng rng(7);
  const auto a = testing::constant_image(8, 3, 0.4);
  EXPECT_EQ(psnr(a, a), 100.0);

  std::vector<double> shifted(a.pixels().begin(), a.pixels().end());
  for (double& v : shifted) v += 0.1;
  const ImageBuffer b(8, 8, 3, shifted);
  EXPECT_NEAR(mean_squared_error(a, b), 0.01, 1e-15);
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-9);

  EXPECT_EQ(psnr(testing::constant_image(5, 1, 0.0), testing::constant_image(5, 1, 1.0)),
            0.0);
}

TEST(PsnrTest, SymmetricMonotoneAndCapped) {
  Rng rng(8);
  const auto a = noise_image(6, 1, rng);
  const auto b = noise_image(6, 1, rng);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  EXPECT_LE(psnr(a, b, 30.0), 30.0);
  double prev = psnr_from_mse(1e-12);
  for (double mse : {1e-9, 1e-6, 1e-3, 0.1, 0.5, 1.0}) {
    const double cur = psnr_from_mse(mse);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_EQ(kind_of([&] { psnr(a, testing::constant_image(5, 1, 0.0)); }),
            ErrorKind::kValidation);
}

TEST(ResizeTest, ExactHalvingAveragesBlocks) {
  Rng rng(9);
  const auto img = noise_image(16, 3, rng);
  const auto half = resize_bilinear(img, 8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double block = (img.at(2 * x, 2 * y, c) + img.at(2 * x + 1, 2 * y, c) +
                              img.at(2 * x, 2 * y + 1, c) +
                              img.at(2 * x + 1, 2 * y + 1, c)) /
                             4.0;
        EXPECT_NEAR(half.at(x, y, c), block, 1e-12);
      }
    }
  }
}

TEST(GrayscaleTest, UsesLumaWeights) {
  ImageBuffer img(1, 1, 3, std::vector<double>{1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(to_grayscale(img).at(0, 0), 0.299);
  img = ImageBuffer(1, 1, 3, std::vector<double>{0.2, 0.4, 0.6});
  EXPECT_NEAR(to_grayscale(img).at(0, 0), 0.299 * 0.2 + 0.587 * 0.4 + 0.114 * 0.6, 1e-15);
}

class LoadDatasetTest : public ::testing::Test {
 protected:
  TempDir dir{"load"};
};

TEST_F(LoadDatasetTest, NoOpResizeKeepsEightBitValues) {
  Rng rng(10);
  const auto img = testing::noise_image_8bit(512, 3, rng);
  const auto manifest = testing::write_corpus(dir.path(), "a", {img}, Provenance::kReal);
  const auto loaded = load_dataset(read_manifest(manifest), 512, false);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0].width(), 512);
  EXPECT_EQ(loaded[0].channels(), 3);
  EXPECT_EQ(loaded[0], img);
}

TEST_F(LoadDatasetTest, HalvesLargeImagesByBlockAverage) {
  Rng rng(11);
  const auto img = testing::noise_image_8bit(1024, 1, rng);
  const auto manifest = testing::write_corpus(dir.path(), "b", {img}, Provenance::kReal);
  const auto loaded = load_dataset(read_manifest(manifest), 512, true);
  ASSERT_EQ(loaded.size(), 1u);
  ASSERT_EQ(loaded[0].width(), 512);
  ASSERT_EQ(loaded[0].channels(), 1);
  double worst = 0.0;
  for (int y = 0; y < 512; ++y) {
    for (int x = 0; x < 512; ++x) {
      const double block = (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                            img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1)) /
                           4.0;
      worst = std::max(worst, std::abs(loaded[0].at(x, y) - block));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST_F(LoadDatasetTest, OrderMatchesManifestAndChannelsFollowRequest) {
  std::vector<ImageBuffer> imgs;
  for (int i = 0; i < 3; ++i) imgs.push_back(testing::constant_image(16, 1, i / 255.0 * 40));
  const auto manifest = testing::write_corpus(dir.path(), "c", imgs, Provenance::kSynthetic);
  const auto loaded = load_dataset(read_manifest(manifest), 8, false);
  ASSERT_EQ(loaded.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(loaded[i].channels(), 3);
    EXPECT_NEAR(loaded[i].at(3, 3, 2), imgs[i].at(0, 0), 1e-12);
  }
}

TEST_F(LoadDatasetTest, Errors) {
  DatasetManifest missing;
  missing.root = dir.path();
  missing.entries.push_back({"nope.png", Provenance::kReal});
  EXPECT_EQ(kind_of([&] { load_dataset(missing, 16, false); }), ErrorKind::kIo);

  std::ofstream(dir / "junk.png") << "definitely not a png";
  DatasetManifest junk;
  junk.root = dir.path();
  junk.entries.push_back({"junk.png", Provenance::kReal});
  EXPECT_EQ(kind_of([&] { load_dataset(junk, 16, false); }), ErrorKind::kFormat);

  DatasetManifest empty;
  EXPECT_EQ(kind_of([&] { load_dataset(empty, 16, false); }), ErrorKind::kValidation);

  std::ofstream(dir / "bad.csv") << "path,label\nx.png,fake\n";
  EXPECT_EQ(kind_of([&] { read_manifest(dir / "bad.csv"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { read_manifest(dir / "absent.csv"); }), ErrorKind::kIo);
}

}  // namespace
}  // namespace synthev
