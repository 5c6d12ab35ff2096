// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "activeobb/error.hpp"
#include "activeobb/uncertainty.hpp"
#include "support.hpp"

using namespace activeobb;

namespace {

std::vector<double> random_distribution(std::mt19937_64& rng, int c) {
  std::gamma_distribution<double> g(0.5, 1.0);
  std::vector<double> p(static_cast<std::size_t>(c));
  double total = 0.0;
  for (double& x : p) total += (x = g(rng) + 1e-300);
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

TEST(CategoryDistribution, Validation) {
  EXPECT_THROW(CategoryDistribution({1.0}), InvalidInput);
  EXPECT_THROW(CategoryDistribution({0.7, 0.7}), InvalidInput);
  EXPECT_THROW(CategoryDistribution({1.5, -0.5}), InvalidInput);
  EXPECT_NO_THROW(CategoryDistribution({0.5, 0.5 + 5e-7}));
  const CategoryDistribution d({0.2, 0.5, 0.3});
  EXPECT_EQ(d.argmax(), 1);
  EXPECT_DOUBLE_EQ(d.max(), 0.5);
}

TEST(CategoryDistribution, ArgmaxTieTakesLowestIndex) {
  EXPECT_EQ(CategoryDistribution({0.1, 0.45, 0.45}).argmax(), 1);
}

TEST(CategoryDistribution, FromScores) {
  const std::vector<double> scores{0.2, 0.6, 0.2};
  const auto d = CategoryDistribution::from_scores(scores);
  EXPECT_NEAR(d.probs()[1], 0.6, 1e-12);
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_THROW(CategoryDistribution::from_scores(zeros), InvalidInput);
  const std::vector<double> negative{0.5, -0.1};
  EXPECT_THROW(CategoryDistribution::from_scores(negative), InvalidInput);
}

TEST(ClassificationUncertainty, Fixtures) {
  EXPECT_EQ(classification_uncertainty(CategoryDistribution(testsupport::one_hot(0, 15))), 0.0);
  EXPECT_NEAR(classification_uncertainty(CategoryDistribution(std::vector<double>(15, 1.0 / 15))), 2.70805, 1e-5);
  EXPECT_NEAR(classification_uncertainty(CategoryDistribution({0.5, 0.5})), 0.693147, 1e-6);
}

TEST(ClassificationUncertainty, Normalized) {
  EXPECT_EQ(normalized_classification_uncertainty(CategoryDistribution(testsupport::one_hot(3, 15))), 0.0);
  EXPECT_NEAR(normalized_classification_uncertainty(CategoryDistribution(std::vector<double>(15, 1.0 / 15))), 1.0,
              1e-12);
  std::vector<double> half(15, 0.0);
  half[0] = half[1] = 0.5;
  EXPECT_NEAR(normalized_classification_uncertainty(CategoryDistribution(half)), 0.25596, 1e-5);
}

TEST(ClassificationUncertainty, BoundsOverRandomDistributions) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> cats(2, 30);
  for (int i = 0; i < 10000; ++i) {
    const int c = cats(rng);
    const auto p = random_distribution(rng, c);
    const double h = classification_uncertainty(CategoryDistribution(p));
    ASSERT_GE(h, 0.0);
    ASSERT_LE(h, std::log(c) + 1e-12);
    ASSERT_LT(h, std::log(c) - 1e-9) << "only the uniform distribution reaches ln C";
  }
}

TEST(ClassificationUncertainty, PermutationInvariant) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 500; ++i) {
    auto p = random_distribution(rng, 15);
    const double h = classification_uncertainty(CategoryDistribution(p));
    std::shuffle(p.begin(), p.end(), rng);
    ASSERT_NEAR(classification_uncertainty(CategoryDistribution(p)), h, 1e-12);
  }
}

TEST(LocalizationUncertainty, Fixtures) {
  const RotatedBox a(0, 0, 2, 2, 0);
  EXPECT_NEAR(localization_uncertainty(a, a), 0.0, 1e-12);
  EXPECT_EQ(localization_uncertainty(a, RotatedBox(50, 0, 2, 2, 0)), 1.0);
  EXPECT_NEAR(localization_uncertainty(a, RotatedBox(1, 0, 2, 2, 0)), 2.0 / 3.0, 1e-12);
}

TEST(AspectWeight, Fixtures) {
  EXPECT_EQ(aspect_weight(3, 3, 0.5), 1.0);
  EXPECT_EQ(aspect_weight(3, 3, 7.0), 1.0);
  EXPECT_EQ(aspect_weight(10, 2, 0.0), 1.0);
  EXPECT_NEAR(aspect_weight(10, 2, 0.5), 0.447214, 1e-6);
  EXPECT_EQ(aspect_weight(10, 2, 0.5), aspect_weight(2, 10, 0.5));
  EXPECT_THROW(aspect_weight(0, 1, 0.5), InvalidInput);
  EXPECT_THROW(aspect_weight(1, 1, -0.1), InvalidInput);
}

TEST(AspectWeight, StrictlyDecreasingInElongation) {
  double prev = aspect_weight(1, 1, 0.5);
  for (double r = 1.1; r < 50; r *= 1.1) {
    const double w = aspect_weight(1, r, 0.5);
    ASSERT_LT(w, prev);
    ASSERT_GT(w, 0.0);
    prev = w;
  }
}

TEST(LocOrientTarget, Fixtures) {
  const RotatedBox g(0, 0, 10, 2, 0.2);
  const auto same = loc_orient_target(g, g, 0.5);
  EXPECT_NEAR(same.u_fused, 0.0, 1e-12);

  const RotatedBox sq(0, 0, 4, 4, 0.0);
  const RotatedBox sq_moved(1, 0.5, 4, 4, 0.3);
  const auto t_sq = loc_orient_target(sq_moved, sq, 0.5);
  EXPECT_EQ(t_sq.w_aspect, 1.0);
  EXPECT_EQ(t_sq.u_fused, t_sq.u_loc);

  const RotatedBox p(0, 0, 10, 2, 0.0);
  const auto t = loc_orient_target(p, g, 0.5);
  std::mt19937_64 rng(1);
  const double mc_iou = testsupport::monte_carlo_iou(p, g, rng);
  EXPECT_NEAR(t.u_loc, 1.0 - mc_iou, 5e-3);
  EXPECT_NEAR(t.u_theta, 0.2, 1e-12);
  EXPECT_NEAR(t.w_aspect, 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(t.u_fused, t.w_aspect * t.u_loc + (1 - t.w_aspect) * 0.2 / kHalfPi, 1e-12);
}

TEST(LocOrientTarget, RangeAndMonotonicity) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 3000; ++i) {
    const auto g = testsupport::random_box(rng);
    const auto p = testsupport::nearby_box(rng, g);
    const auto t = loc_orient_target(p, g);
    ASSERT_GE(t.u_fused, 0.0);
    ASSERT_LE(t.u_fused, 1.0);
    ASSERT_NEAR(t.u_fused, t.w_aspect * t.u_loc + (1 - t.w_aspect) * t.u_theta / kHalfPi, 1e-12);
  }
  // Fixed aspect, growing rotation: both u_loc and u_theta rise, and so does the fusion.
  const RotatedBox g(0, 0, 8, 2, 0);
  double prev = -1;
  for (double a = 0; a <= kHalfPi; a += 0.05) {
    const double u = loc_orient_target(RotatedBox(0, 0, 8, 2, a), g).u_fused;
    ASSERT_GE(u, prev);
    prev = u;
  }
}

TEST(LupLoss, Fixtures) {
  EXPECT_NEAR(lup_loss(0.5, 0.5), 0.693147, 1e-6);
  EXPECT_LE(lup_loss(1.0, 1.0), 1e-6);
  EXPECT_LE(lup_loss(0.0, 0.0), 1e-6);
  EXPECT_TRUE(std::isfinite(lup_loss(0.0, 1.0)));
  EXPECT_THROW(lup_loss(1.2, 0.5), InvalidInput);
  EXPECT_THROW(lup_loss(0.5, -0.1), InvalidInput);
}

TEST(LupLoss, MinimizedAtTarget) {
  for (int j = 0; j <= 20; ++j) {
    const double t = j / 20.0;
    const double at_target = lup_loss(t, t);
    for (int k = 0; k <= 1000; ++k) {
      ASSERT_GE(lup_loss(k / 1000.0, t), at_target - 1e-12) << t << " " << k;
    }
  }
}

TEST(LupLoss, BatchReductions) {
  const std::vector<double> p{0.2, 0.7, 0.5};
  const std::vector<double> t{0.1, 0.9, 0.5};
  const double sum = lup_loss(0.2, 0.1) + lup_loss(0.7, 0.9) + lup_loss(0.5, 0.5);
  EXPECT_NEAR(lup_loss(p, t, Reduction::kSum), sum, 1e-12);
  EXPECT_NEAR(lup_loss(p, t), sum / 3, 1e-12);
  const std::vector<double> short_t{0.1};
  EXPECT_THROW(lup_loss(p, short_t), InvalidInput);
}
