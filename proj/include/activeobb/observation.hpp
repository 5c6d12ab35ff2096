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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "activeobb/diversity.hpp"
#include "activeobb/geometry.hpp"
#include "activeobb/uncertainty.hpp"

namespace activeobb {

struct GroundTruthInstance {
  std::string image_id;
  std::string instance_id;
  int category_id = 0;
  RotatedBox box;
};

// One detector output. instance_id links the prediction to a candidate or
// ground-truth identity and may be empty for unlinked detections.
struct InstancePrediction {
  std::string image_id;
  std::string instance_id;
  RotatedBox box;
  CategoryDistribution probs;
  FeatureVector feature;
  double pred_loc_unc = 0.0;  // output of the localization/orientation uncertainty head

  double confidence() const { return probs.max(); }
  int category() const { return probs.argmax(); }
};

// Throws InvalidInput when pred_loc_unc is outside [0, 1].
void validate(const InstancePrediction& pred);

// Observed model state; every dimension in [0, 1].
struct AbilityVector {
  double a_cls = 0.0;
  double a_loc = 0.0;
  double a_inter = 0.0;
  double a_intra = 0.0;

  double bar() const { return (a_cls + a_loc + a_inter + a_intra) / 4.0; }
  std::array<double, 4> as_array() const { return {a_cls, a_loc, a_inter, a_intra}; }
};

// Per-candidate scores in dimension order (cls, loc_theta, inter, intra).
struct ScoreBreakdown {
  double u_cls_norm = 0.0;
  double u_loc_theta = 0.0;
  double d_inter = 0.0;
  double d_intra_norm = 0.0;
  std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
  double s = 0.0;
  double s_final = 0.0;
  int pseudo_category = 0;

  std::array<double, 4> scores() const { return {u_cls_norm, u_loc_theta, d_inter, d_intra_norm}; }
};

struct Match {
  std::size_t pred_index = 0;
  std::size_t gt_index = 0;
  double iou = 0.0;
};

// Greedy one-to-one matching within each image. Predictions are visited by
// confidence descending (ties: instance_id, then input order); each takes the
// unmatched ground truth of highest RIoU >= iou_threshold (ties: GT instance_id).
std::vector<Match> match_predictions(std::span<const InstancePrediction> preds,
                                     std::span<const GroundTruthInstance> gts, double iou_threshold,
                                     bool class_aware);

// All-point interpolated AP for one category; predictions count toward their
// argmax category. nullopt when the category has no ground truth.
std::optional<double> average_precision(std::span<const InstancePrediction> preds,
                                        std::span<const GroundTruthInstance> gts, int category,
                                        double iou_threshold = 0.5);

// Mean over ground truth of the RIoU of its class-agnostic, threshold-free
// greedy best match; unmatched ground truth contributes 0.
double mean_matched_iou(std::span<const InstancePrediction> preds,
                        std::span<const GroundTruthInstance> gts);

struct DetectionMetrics {
  std::map<int, double> ap;  // categories present in ground truth
  double map50 = 0.0;
  double mean_iou = 0.0;
};

DetectionMetrics evaluate_detections(std::span<const InstancePrediction> preds,
                                     std::span<const GroundTruthInstance> gts);

enum class InterAggregate { kMean, kSum };

struct ObservationConfig {
  double rare_quantile = 1.0 / 3.0;
  InterAggregate inter_aggregate = InterAggregate::kMean;
};

// Categories whose labeled count is <= the rare_quantile quantile (linear
// interpolation between order statistics) of all per-category counts.
std::vector<int> rare_categories(std::span<const std::int64_t> labeled_counts, double rare_quantile);

struct AbilityReport {
  AbilityVector ability;
  std::vector<int> rare;
  std::map<int, double> ap;
};

AbilityReport ability_vector(std::span<const InstancePrediction> eval_preds,
                             std::span<const GroundTruthInstance> eval_gts,
                             std::span<const std::int64_t> labeled_counts,
                             const ObservationConfig& config = {});

// Softmax of (1 - A_i).
std::array<double, 4> mso_weights(const AbilityVector& a);

double composite_score(const std::array<double, 4>& u, const AbilityVector& a);

// a_bar*S + (1 - a_bar)*(1 - S).
double final_score(double s, double a_bar);

}  // namespace activeobb
