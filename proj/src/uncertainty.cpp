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

#include "activeobb/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "activeobb/error.hpp"

namespace activeobb {

CategoryDistribution::CategoryDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw InvalidInput("CategoryDistribution: need at least 2 categories");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidInput("CategoryDistribution: probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    throw InvalidInput("CategoryDistribution: probabilities sum to " + std::to_string(sum));
  }
}

CategoryDistribution CategoryDistribution::from_scores(std::span<const double> scores) {
  double sum = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvalidInput("from_scores: scores must be finite and non-negative");
    }
    sum += s;
  }
  if (sum <= kProbFloor) throw InvalidInput("from_scores: all-zero score vector");
  std::vector<double> probs(scores.begin(), scores.end());
  for (double& p : probs) p /= sum;
  return CategoryDistribution(std::move(probs));
}

int CategoryDistribution::argmax() const {
  return static_cast<int>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

double CategoryDistribution::max() const { return *std::max_element(probs_.begin(), probs_.end()); }

double classification_uncertainty(const CategoryDistribution& p) {
  double h = 0.0;
  for (double pc : p.probs()) {
    if (pc > kProbFloor) h -= pc * std::log(pc);
  }
  return std::clamp(h, 0.0, std::log(static_cast<double>(p.size())));
}

double normalized_classification_uncertainty(const CategoryDistribution& p) {
  return std::clamp(classification_uncertainty(p) / std::log(static_cast<double>(p.size())), 0.0, 1.0);
}

double localization_uncertainty(const RotatedBox& pred, const RotatedBox& gt) {
  return 1.0 - riou(pred, gt);
}

double aspect_weight(double w, double h, double beta) {
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h)) {
    throw InvalidInput("aspect_weight: dimensions must be positive");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidInput("aspect_weight: beta must be >= 0");
  return std::exp(-beta * std::abs(std::log(h / w)));
}

LocOrientTarget loc_orient_target(const RotatedBox& pred, const RotatedBox& gt, double beta) {
  LocOrientTarget t;
  t.u_loc = localization_uncertainty(pred, gt);
  t.u_theta = angular_deviation(pred, gt);
  t.w_aspect = aspect_weight(gt.w(), gt.h(), beta);
  t.u_fused = std::clamp(t.w_aspect * t.u_loc + (1.0 - t.w_aspect) * (t.u_theta / kHalfPi), 0.0, 1.0);
  return t;
}

double lup_loss(double predicted, double target) {
  if (!(predicted >= 0.0 && predicted <= 1.0) || !(target >= 0.0 && target <= 1.0)) {
    throw InvalidInput("lup_loss: inputs must lie in [0, 1]");
  }
  const double p = std::clamp(predicted, kLogClamp, 1.0 - kLogClamp);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

double lup_loss(std::span<const double> predicted, std::span<const double> target,
                Reduction reduction) {
  if (predicted.size() != target.size()) throw InvalidInput("lup_loss: size mismatch");
  if (predicted.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) total += lup_loss(predicted[i], target[i]);
  return reduction == Reduction::kSum ? total : total / static_cast<double>(predicted.size());
}

}  // namespace activeobb
