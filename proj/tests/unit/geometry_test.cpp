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

#include <cmath>
#include <limits>
#include <random>

#include "activeobb/error.hpp"
#include "activeobb/geometry.hpp"
#include "support.hpp"

using namespace activeobb;
using testsupport::random_box;

namespace {

double quad_area(const ConvexQuad& q) {
  const auto& c = q.corners();
  double a = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double px = c[i].x - c[0].x, py = c[i].y - c[0].y;
    const double nx = c[(i + 1) % 4].x - c[0].x, ny = c[(i + 1) % 4].y - c[0].y;
    a += px * ny - nx * py;
  }
  return a / 2.0;
}

ConvexQuad axis_square(double x0, double y0, double x1, double y1) {
  return ConvexQuad({Point{x0, y0}, Point{x1, y0}, Point{x1, y1}, Point{x0, y1}});
}

}  // namespace

TEST(NormalizeAngle, FixedPoints) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(kHalfPi), -kHalfPi);
  EXPECT_NEAR(normalize_angle(3.0 * kPi / 4.0), -kPi / 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(normalize_angle(-kHalfPi), -kHalfPi);
}

TEST(NormalizeAngle, RangeAndCongruence) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> any(-100.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = any(rng);
    const double r = normalize_angle(t);
    ASSERT_GE(r, -kHalfPi);
    ASSERT_LT(r, kHalfPi);
    const double k = (t - r) / kPi;
    ASSERT_NEAR(k, std::round(k), 1e-9) << t;
  }
}

TEST(NormalizeAngle, RejectsNonFinite) {
  EXPECT_THROW(normalize_angle(std::numeric_limits<double>::infinity()), InvalidInput);
  EXPECT_THROW(normalize_angle(std::nan("")), InvalidInput);
}

TEST(RotatedBox, RejectsDegenerate) {
  EXPECT_THROW(RotatedBox(0, 0, 0, 1, 0), InvalidInput);
  EXPECT_THROW(RotatedBox(0, 0, 1, -2, 0), InvalidInput);
  EXPECT_THROW(RotatedBox(std::nan(""), 0, 1, 1, 0), InvalidInput);
  EXPECT_THROW(RotatedBox(0, 0, 1, std::numeric_limits<double>::infinity(), 0), InvalidInput);
}

TEST(RotatedBox, NormalizesTheta) {
  const RotatedBox b(0, 0, 2, 1, kPi);
  EXPECT_NEAR(b.theta(), 0.0, 1e-12);
  const RotatedBox s = RotatedBox(0, 0, 4, 2, 0.3).swapped();
  EXPECT_EQ(s.w(), 2.0);
  EXPECT_EQ(s.h(), 4.0);
  EXPECT_NEAR(s.theta(), 0.3 + kHalfPi - kPi, 1e-12);
}

TEST(ToPolygon, AxisAlignedSquare) {
  const auto q = to_polygon(RotatedBox(0, 0, 2, 2, 0));
  for (const auto& p : q.corners()) {
    EXPECT_NEAR(std::abs(p.x), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(p.y), 1.0, 1e-12);
  }
  EXPECT_NEAR(quad_area(q), 4.0, 1e-12);
}

TEST(ToPolygon, NearlyDiagonalSquareKeepsArea) {
  const auto q = to_polygon(RotatedBox(0, 0, 2, 2, kPi / 4 - 1e-9));
  EXPECT_NEAR(quad_area(q), 4.0, 1e-9);
}

TEST(ToPolygon, Rectangle) {
  const auto q = to_polygon(RotatedBox(5, 5, 2, 4, 0));
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  for (const auto& p : q.corners()) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  EXPECT_NEAR(x0, 4, 1e-12);
  EXPECT_NEAR(x1, 6, 1e-12);
  EXPECT_NEAR(y0, 3, 1e-12);
  EXPECT_NEAR(y1, 7, 1e-12);
}

TEST(ToPolygon, AreaMatchesAndOrderIsCounterClockwise) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto b = random_box(rng, 1000.0, 0.01, 500.0);
    const auto q = to_polygon(b);
    ASSERT_GT(quad_area(q), 0.0);
    ASSERT_NEAR(quad_area(q) / b.area(), 1.0, 1e-9);
    ASSERT_NEAR(q.signed_area(), quad_area(q), 1e-9 * b.area());
  }
}

TEST(ConvexQuad, RejectsClockwiseOrFlat) {
  EXPECT_THROW(ConvexQuad({Point{0, 0}, Point{0, 1}, Point{1, 1}, Point{1, 0}}), InvalidInput);
  EXPECT_THROW(ConvexQuad({Point{0, 0}, Point{1, 0}, Point{2, 0}, Point{3, 0}}), InvalidInput);
}

TEST(IntersectionArea, Fixtures) {
  const auto unit = axis_square(0, 0, 1, 1);
  EXPECT_NEAR(intersection_area(unit, unit), 1.0, 1e-12);
  EXPECT_EQ(intersection_area(unit, axis_square(3, 3, 4, 4)), 0.0);
  EXPECT_NEAR(intersection_area(axis_square(-1, -1, 1, 1), axis_square(0, -1, 2, 1)), 2.0, 1e-12);
}

TEST(IntersectionArea, TouchingEdgesGiveZero) {
  EXPECT_EQ(intersection_area(axis_square(0, 0, 1, 1), axis_square(1, 0, 2, 1)), 0.0);
}

TEST(IntersectionArea, Symmetric) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_box(rng);
    const auto b = testsupport::nearby_box(rng, a);
    const auto pa = to_polygon(a);
    const auto pb = to_polygon(b);
    ASSERT_EQ(intersection_area(pa, pb), intersection_area(pb, pa));
  }
}

TEST(Riou, Fixtures) {
  const RotatedBox a(0, 0, 2, 2, 0);
  EXPECT_NEAR(riou(a, a), 1.0, 1e-12);
  EXPECT_NEAR(riou(a, RotatedBox(1, 0, 2, 2, 0)), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(riou(a, RotatedBox(10, 0, 2, 2, 0)), 0.0);
  EXPECT_GT(riou(RotatedBox(0, 0, 10, 2, 0), RotatedBox(0, 0, 10, 2, 14.0 * kPi / 180.0)), 0.5);
}

TEST(Riou, NestedBoxes) {
  EXPECT_NEAR(riou(RotatedBox(0, 0, 4, 4, 0.3), RotatedBox(0, 0, 2, 2, 0.3)), 0.25, 1e-12);
}

TEST(Riou, SameRegionUnderEitherRepresentation) {
  const RotatedBox a(3, -2, 6, 2, 0.4);
  EXPECT_NEAR(riou(a, a.swapped()), 1.0, 1e-12);
}

TEST(Riou, SymmetricAndSelfIdentity) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_box(rng);
    const auto b = testsupport::nearby_box(rng, a);
    const double ab = riou(a, b);
    ASSERT_EQ(ab, riou(b, a));
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_NEAR(riou(a, a), 1.0, 1e-9);
  }
}

TEST(Riou, RigidTransformInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_box(rng);
    const auto b = testsupport::nearby_box(rng, a);
    const double p = phi(rng), tx = shift(rng), ty = shift(rng);
    ASSERT_NEAR(riou(a, b), riou(testsupport::rigid(a, p, tx, ty), testsupport::rigid(b, p, tx, ty)), 1e-7);
  }
}

TEST(Riou, AgreesWithPointSampling) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    const auto a = random_box(rng);
    const auto b = testsupport::nearby_box(rng, a);
    ASSERT_NEAR(riou(a, b), testsupport::monte_carlo_iou(a, b, rng, 250'000), 5e-3);
  }
}

TEST(Riou, TinyAndHugeScales) {
  for (double s : {1e-4, 1.0, 1e5}) {
    const RotatedBox a(0, 0, 2 * s, 2 * s, 0);
    const RotatedBox b(s, 0, 2 * s, 2 * s, 0);
    EXPECT_NEAR(riou(a, b), 1.0 / 3.0, 1e-9) << s;
  }
}

TEST(Riou, SmallBoxesFarFromOrigin) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_box(rng, 0.05, 0.01, 0.05);
    const auto b = testsupport::nearby_box(rng, a);
    const double near_origin = riou(a, b);
    const double far = riou(testsupport::rigid(a, 0.0, 1000.0, -2000.0), testsupport::rigid(b, 0.0, 1000.0, -2000.0));
    ASSERT_NEAR(far, near_origin, 1e-6) << i;
  }
}

TEST(CorrectedPredAngle, Fixtures) {
  EXPECT_NEAR(corrected_pred_angle(RotatedBox(0, 0, 4, 2, 0.3), RotatedBox(0, 0, 6, 2, 0.1)), 0.3, 1e-12);
  EXPECT_NEAR(corrected_pred_angle(RotatedBox(0, 0, 2, 4, 0), RotatedBox(0, 0, 4, 2, 0)), -kHalfPi, 1e-12);
  // A square counts as w >= h; the tall ground truth does not, so the angle turns.
  EXPECT_NEAR(corrected_pred_angle(RotatedBox(0, 0, 3, 3, 0.2), RotatedBox(0, 0, 2, 5, 0.2)), 0.2 - kHalfPi,
              1e-12);
}

TEST(AngularDeviation, Fixtures) {
  const RotatedBox b(1, 2, 4, 2, 0.7);
  EXPECT_EQ(angular_deviation(b, b), 0.0);
  EXPECT_NEAR(angular_deviation(RotatedBox(0, 0, 2, 4, 0), RotatedBox(0, 0, 4, 2, kHalfPi)), 0.0, 1e-12);
  EXPECT_NEAR(angular_deviation(RotatedBox(0, 0, 4, 2, -kHalfPi + 0.01), RotatedBox(0, 0, 4, 2, kHalfPi - 0.01)),
              0.02, 1e-9);
}

TEST(AngularDeviation, EdgeSwapInvariance) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_box(rng);
    const auto g = random_box(rng);
    const double d = angular_deviation(p, g);
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, kHalfPi);
    ASSERT_NEAR(d, angular_deviation(p.swapped(), g), 1e-9);
    ASSERT_NEAR(angular_deviation(p, p), 0.0, 1e-9);
    ASSERT_NEAR(angular_deviation(p, p.swapped()), 0.0, 1e-9);
  }
}
