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

#include <span>
#include <vector>

#include "activeobb/geometry.hpp"

namespace activeobb {

inline constexpr double kProbSumTolerance = 1e-6;
inline constexpr double kProbFloor = 1e-12;
inline constexpr double kLogClamp = 1e-7;
inline constexpr double kDefaultBeta = 0.5;

// Validated categorical distribution over C >= 2 categories.
class CategoryDistribution {
 public:
  explicit CategoryDistribution(std::vector<double> probs);

  // Normalizes non-negative per-category scores (e.g. one-stage sigmoid
  // outputs) by their sum. Rejects all-zero and negative inputs.
  static CategoryDistribution from_scores(std::span<const double> scores);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  int argmax() const;
  double max() const;

 private:
  std::vector<double> probs_;
};

// Shannon entropy with natural log, in [0, ln C].
double classification_uncertainty(const CategoryDistribution& p);

// Entropy divided by ln C, in [0, 1].
double normalized_classification_uncertainty(const CategoryDistribution& p);

// 1 - RIoU(pred, gt).
double localization_uncertainty(const RotatedBox& pred, const RotatedBox& gt);

// exp(-beta * |ln(h/w)|); 1 for squares, shrinking with elongation.
double aspect_weight(double w, double h, double beta);

struct LocOrientTarget {
  double u_loc = 0.0;
  double u_theta = 0.0;
  double w_aspect = 1.0;
  double u_fused = 0.0;
};

// Supervision target of the localization/orientation uncertainty head.
// Needs ground truth; the aspect weight uses the ground-truth object's size.
LocOrientTarget loc_orient_target(const RotatedBox& pred, const RotatedBox& gt,
                                  double beta = kDefaultBeta);

enum class Reduction { kSum, kMean };

// Binary cross-entropy between predicted and target uncertainty.
double lup_loss(double predicted, double target);
double lup_loss(std::span<const double> predicted, std::span<const double> target,
                Reduction reduction = Reduction::kMean);

}  // namespace activeobb
