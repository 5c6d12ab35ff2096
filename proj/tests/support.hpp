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

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "activeobb/geometry.hpp"
#include "activeobb/io.hpp"
#include "activeobb/observation.hpp"

namespace testsupport {

using activeobb::RotatedBox;

inline RotatedBox random_box(std::mt19937_64& rng, double extent = 50.0, double min_side = 1.0,
                             double max_side = 40.0) {
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::uniform_real_distribution<double> side(std::log(min_side), std::log(max_side));
  std::uniform_real_distribution<double> angle(-activeobb::kPi, activeobb::kPi);
  return RotatedBox(pos(rng), pos(rng), std::exp(side(rng)), std::exp(side(rng)), angle(rng));
}

// A second box near `a`: offsets and sizes on the scale of `a`, so pairs cover
// disjoint, partially overlapping and nested configurations.
inline RotatedBox nearby_box(std::mt19937_64& rng, const RotatedBox& a) {
  const double scale = std::max(a.w(), a.h());
  std::uniform_real_distribution<double> off(-scale, scale);
  std::uniform_real_distribution<double> factor(0.4, 1.6);
  std::uniform_real_distribution<double> angle(-activeobb::kPi, activeobb::kPi);
  return RotatedBox(a.cx() + off(rng), a.cy() + off(rng), a.w() * factor(rng), a.h() * factor(rng), angle(rng));
}

inline bool inside(const RotatedBox& b, double x, double y) {
  const double dx = x - b.cx();
  const double dy = y - b.cy();
  const double c = std::cos(b.theta());
  const double s = std::sin(b.theta());
  const double u = dx * c + dy * s;
  const double v = -dx * s + dy * c;
  return std::abs(u) <= b.w() / 2 && std::abs(v) <= b.h() / 2;
}

inline void bounds(const RotatedBox& b, double& x0, double& x1, double& y0, double& y1) {
  const double c = std::abs(std::cos(b.theta()));
  const double s = std::abs(std::sin(b.theta()));
  const double hx = (b.w() * c + b.h() * s) / 2;
  const double hy = (b.w() * s + b.h() * c) / 2;
  x0 = b.cx() - hx;
  x1 = b.cx() + hx;
  y0 = b.cy() - hy;
  y1 = b.cy() + hy;
}

// Point-sampling IoU: `samples` uniform points over the joint bounding
// rectangle, one jittered point per cell of a square grid.
inline double monte_carlo_iou(const RotatedBox& a, const RotatedBox& b, std::mt19937_64& rng,
                              std::int64_t samples = 1'000'000) {
  double ax0, ax1, ay0, ay1, bx0, bx1, by0, by1;
  bounds(a, ax0, ax1, ay0, ay1);
  bounds(b, bx0, bx1, by0, by1);
  const double x0 = std::min(ax0, bx0), x1 = std::max(ax1, bx1);
  const double y0 = std::min(ay0, by0), y1 = std::max(ay1, by1);
  const auto side = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(samples))));
  const double dx = (x1 - x0) / static_cast<double>(side);
  const double dy = (y1 - y0) / static_cast<double>(side);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::int64_t in_a = 0, in_b = 0, in_both = 0;
  for (std::int64_t i = 0; i < side; ++i) {
    for (std::int64_t j = 0; j < side; ++j) {
      const double x = x0 + (static_cast<double>(i) + jitter(rng)) * dx;
      const double y = y0 + (static_cast<double>(j) + jitter(rng)) * dy;
      const bool ia = inside(a, x, y);
      const bool ib = inside(b, x, y);
      in_a += ia;
      in_b += ib;
      in_both += ia && ib;
    }
  }
  const double uni = static_cast<double>(in_a + in_b - in_both);
  return uni > 0 ? static_cast<double>(in_both) / uni : 0.0;
}

inline RotatedBox rigid(const RotatedBox& b, double phi, double tx, double ty) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return RotatedBox(c * b.cx() - s * b.cy() + tx, s * b.cx() + c * b.cy() + ty, b.w(), b.h(), b.theta() + phi);
}

inline std::vector<double> one_hot(int c, int num_categories) {
  std::vector<double> p(static_cast<std::size_t>(num_categories), 0.0);
  p[static_cast<std::size_t>(c)] = 1.0;
  return p;
}

// Puts `conf` on category c and spreads the rest evenly.
inline std::vector<double> peaked(int c, int num_categories, double conf) {
  std::vector<double> p(static_cast<std::size_t>(num_categories), (1.0 - conf) / (num_categories - 1));
  p[static_cast<std::size_t>(c)] = conf;
  return p;
}

inline activeobb::InstancePrediction prediction(const std::string& image, const std::string& id,
                                                const RotatedBox& box, std::vector<double> probs,
                                                std::vector<double> feature = {1.0, 0.0},
                                                double loc_unc = 0.0) {
  return activeobb::InstancePrediction{image, id, box, activeobb::CategoryDistribution(std::move(probs)),
                                       activeobb::FeatureVector(std::move(feature)), loc_unc};
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("activeobb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#ifdef ACTIVEOBB_FIXTURE_DIR
inline std::filesystem::path fixture(const std::string& relative) {
  return std::filesystem::path(ACTIVEOBB_FIXTURE_DIR) / relative;
}
#endif

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  activeobb::for_each_jsonl(path, [&](const nlohmann::json& j, std::size_t) { rows.push_back(j); });
  return rows;
}

}  // namespace testsupport
