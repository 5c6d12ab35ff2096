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

#pragma once

#include <array>
#include <numbers>

namespace activeobb {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Coordinate tolerance for polygon clipping; intersection areas below
// kGeomEps * (area_a + area_b) are reported as zero.
inline constexpr double kGeomEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Maps any finite angle onto [-pi/2, pi/2), congruent modulo pi.
// Throws InvalidInput on non-finite input.
double normalize_angle(double theta);

// Oriented box in le90 form: theta is the rotation of the w-edge from +x,
// normalized on construction. Rejects non-finite fields and w <= 0, h <= 0.
class RotatedBox {
 public:
  RotatedBox(double cx, double cy, double w, double h, double theta);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double theta() const { return theta_; }
  double area() const { return w_ * h_; }

  // Same region, other representation: w and h swapped, theta + pi/2.
  RotatedBox swapped() const;

  bool operator==(const RotatedBox&) const = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
  double theta_;
};

// Four corners in counter-clockwise order.
class ConvexQuad {
 public:
  explicit ConvexQuad(const std::array<Point, 4>& corners);

  const std::array<Point, 4>& corners() const { return corners_; }
  double signed_area() const;

 private:
  std::array<Point, 4> corners_;
};

ConvexQuad to_polygon(const RotatedBox& box);

// Area of the intersection of two convex quads (convex clipping + shoelace).
double intersection_area(const ConvexQuad& a, const ConvexQuad& b);

double riou(const RotatedBox& a, const RotatedBox& b);

// Edge-swap correction: rotates the predicted angle by pi/2 when the
// long-side indicators [w >= h] of prediction and ground truth disagree.
double corrected_pred_angle(const RotatedBox& pred, const RotatedBox& gt);

// Minimal angular difference in [0, pi/2] after edge-swap correction.
double angular_deviation(const RotatedBox& pred, const RotatedBox& gt);

}  // namespace activeobb
