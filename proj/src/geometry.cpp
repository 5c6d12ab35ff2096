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

#include "activeobb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "activeobb/error.hpp"

namespace activeobb {

namespace {

constexpr std::size_t kMaxClipVertices = 16;

// Small fixed-capacity polygon for the clipping loop; two convex quads
// intersect in at most eight vertices.
struct ClipPolygon {
  std::array<Point, kMaxClipVertices> pts{};
  std::size_t size = 0;

  void push(const Point& p) {
    if (size < kMaxClipVertices) pts[size++] = p;
  }
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Shoelace taken about the first vertex; absolute coordinates would cancel badly
// for small polygons far from the origin.
template <typename Points>
double shoelace(const Points& pts, std::size_t n) {
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) twice += cross(pts[0], pts[i], pts[i + 1]);
  return 0.5 * twice;
}

Point segment_line_intersection(const Point& p, const Point& q, double dp, double dq) {
  const double t = dp / (dp - dq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

// Sutherland-Hodgman: clips `subject` against every edge of the CCW `clip`.
double clipped_area(const ConvexQuad& subject, const ConvexQuad& clip) {
  // Work in coordinates local to the clip polygon.
  const Point origin = clip.corners()[0];
  auto local = [&](const Point& p) { return Point{p.x - origin.x, p.y - origin.y}; };
  ClipPolygon current;
  for (const Point& p : subject.corners()) current.push(local(p));
  std::array<Point, 4> edges{};
  for (std::size_t i = 0; i < 4; ++i) edges[i] = local(clip.corners()[i]);

  double scale = 0.0;
  for (const Point& p : edges) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  for (std::size_t i = 0; i < current.size; ++i) {
    scale = std::max({scale, std::abs(current.pts[i].x), std::abs(current.pts[i].y)});
  }
  const double tol = kGeomEps * scale * scale;

  for (std::size_t e = 0; e < edges.size() && current.size > 0; ++e) {
    const Point& a = edges[e];
    const Point& b = edges[(e + 1) % edges.size()];
    ClipPolygon next;
    for (std::size_t i = 0; i < current.size; ++i) {
      const Point& p = current.pts[i];
      const Point& q = current.pts[(i + 1) % current.size];
      const double dp = cross(a, b, p);
      const double dq = cross(a, b, q);
      const bool p_in = dp >= -tol;
      const bool q_in = dq >= -tol;
      if (p_in) next.push(p);
      if (p_in != q_in && std::abs(dp - dq) > 0.0) {
        next.push(segment_line_intersection(p, q, dp, dq));
      }
    }
    current = next;
  }
  if (current.size < 3) return 0.0;
  return std::max(0.0, shoelace(current.pts, current.size));
}

bool corners_less(const ConvexQuad& a, const ConvexQuad& b) {
  const auto& ca = a.corners();
  const auto& cb = b.corners();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i].x != cb[i].x) return ca[i].x < cb[i].x;
    if (ca[i].y != cb[i].y) return ca[i].y < cb[i].y;
  }
  return false;
}

struct Extent {
  double min_x, max_x, min_y, max_y;
};

Extent extent_of(const ConvexQuad& q) {
  Extent e{q.corners()[0].x, q.corners()[0].x, q.corners()[0].y, q.corners()[0].y};
  for (const Point& p : q.corners()) {
    e.min_x = std::min(e.min_x, p.x);
    e.max_x = std::max(e.max_x, p.x);
    e.min_y = std::min(e.min_y, p.y);
    e.max_y = std::max(e.max_y, p.y);
  }
  return e;
}

}  // namespace

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw InvalidInput("normalize_angle: non-finite angle");
  }
  double r = std::fmod(theta + kHalfPi, kPi);
  if (r < 0.0) r += kPi;
  double out = r - kHalfPi;
  // fmod rounding can land exactly on the excluded upper endpoint.
  if (out >= kHalfPi) out -= kPi;
  if (out < -kHalfPi) out = -kHalfPi;
  return out;
}

RotatedBox::RotatedBox(double cx, double cy, double w, double h, double theta)
    : cx_(cx), cy_(cy), w_(w), h_(h), theta_(0.0) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(theta)) {
    throw InvalidInput("RotatedBox: non-finite field");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw InvalidInput("RotatedBox: degenerate box (w=" + std::to_string(w) +
                       ", h=" + std::to_string(h) + ")");
  }
  theta_ = normalize_angle(theta);
}

RotatedBox RotatedBox::swapped() const { return RotatedBox(cx_, cy_, h_, w_, theta_ + kHalfPi); }

ConvexQuad::ConvexQuad(const std::array<Point, 4>& corners) : corners_(corners) {
  if (!(signed_area() > 0.0)) {
    throw InvalidInput("ConvexQuad: corners must be counter-clockwise with positive area");
  }
}

double ConvexQuad::signed_area() const { return shoelace(corners_, corners_.size()); }

ConvexQuad to_polygon(const RotatedBox& box) {
  const double c = std::cos(box.theta());
  const double s = std::sin(box.theta());
  const double hw = 0.5 * box.w();
  const double hh = 0.5 * box.h();
  // Local corners (-hw,-hh), (hw,-hh), (hw,hh), (-hw,hh) are CCW; a rotation keeps them so.
  const std::array<std::pair<double, double>, 4> local{{{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}}};
  std::array<Point, 4> pts{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [lx, ly] = local[i];
    pts[i] = {box.cx() + lx * c - ly * s, box.cy() + lx * s + ly * c};
  }
  return ConvexQuad(pts);
}

double intersection_area(const ConvexQuad& a, const ConvexQuad& b) {
  const Extent ea = extent_of(a);
  const Extent eb = extent_of(b);
  if (ea.max_x < eb.min_x || eb.max_x < ea.min_x || ea.max_y < eb.min_y || eb.max_y < ea.min_y) {
    return 0.0;
  }
  // Fixed argument order keeps the result bit-identical under swapping.
  const bool swap = corners_less(b, a);
  const double area = swap ? clipped_area(b, a) : clipped_area(a, b);
  const double total = a.signed_area() + b.signed_area();
  if (area < kGeomEps * total) return 0.0;
  return std::min(area, std::min(a.signed_area(), b.signed_area()));
}

double riou(const RotatedBox& a, const RotatedBox& b) {
  const double inter = intersection_area(to_polygon(a), to_polygon(b));
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double corrected_pred_angle(const RotatedBox& pred, const RotatedBox& gt) {
  const bool pred_long_w = pred.w() >= pred.h();
  const bool gt_long_w = gt.w() >= gt.h();
  if (pred_long_w != gt_long_w) return normalize_angle(pred.theta() + kHalfPi);
  return normalize_angle(pred.theta());
}

double angular_deviation(const RotatedBox& pred, const RotatedBox& gt) {
  const double diff = std::abs(corrected_pred_angle(pred, gt) - normalize_angle(gt.theta()));
  return std::clamp(std::min(diff, kPi - diff), 0.0, kHalfPi);
}

}  // namespace activeobb
