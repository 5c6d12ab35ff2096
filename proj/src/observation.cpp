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

#include "activeobb/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "activeobb/error.hpp"

namespace activeobb {

namespace {

// Ground-truth indices per image, each list sorted by instance_id.
std::unordered_map<std::string, std::vector<std::size_t>> index_by_image(
    std::span<const GroundTruthInstance> gts) {
  std::unordered_map<std::string, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < gts.size(); ++i) by_image[gts[i].image_id].push_back(i);
  for (auto& [_, idx] : by_image) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(gts[a].instance_id, a) < std::tie(gts[b].instance_id, b);
    });
  }
  return by_image;
}

std::vector<std::size_t> confidence_order(std::span<const InstancePrediction> preds) {
  std::vector<double> conf(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) conf[i] = preds[i].confidence();
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (conf[a] != conf[b]) return conf[a] > conf[b];
    if (preds[a].instance_id != preds[b].instance_id) return preds[a].instance_id < preds[b].instance_id;
    return a < b;
  });
  return order;
}

double interpolated_ap(const std::vector<bool>& tp_in_order, std::size_t num_gt) {
  if (num_gt == 0) return 0.0;
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < tp_in_order.size(); ++i) {
    if (tp_in_order[i]) ++tp;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  // Envelope: precision at recall r is the max precision at any recall >= r.
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return std::clamp(ap, 0.0, 1.0);
}

}  // namespace

void validate(const InstancePrediction& pred) {
  if (!(pred.pred_loc_unc >= 0.0 && pred.pred_loc_unc <= 1.0)) {
    throw InvalidInput("prediction " + pred.instance_id + ": pred_loc_unc outside [0, 1]");
  }
}

std::vector<Match> match_predictions(std::span<const InstancePrediction> preds,
                                     std::span<const GroundTruthInstance> gts, double iou_threshold,
                                     bool class_aware) {
  std::vector<Match> matches;
  if (preds.empty() || gts.empty()) return matches;
  const auto by_image = index_by_image(gts);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t p : confidence_order(preds)) {
    const auto it = by_image.find(preds[p].image_id);
    if (it == by_image.end()) continue;
    const int label = preds[p].category();
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g : it->second) {
      if (taken[g]) continue;
      if (class_aware && gts[g].category_id != label) continue;
      const double iou = riou(preds[p].box, gts[g].box);
      if (iou >= iou_threshold && iou > best_iou) {
        best = g;
        best_iou = iou;
      }
    }
    if (best) {
      taken[*best] = true;
      matches.push_back({p, *best, best_iou});
    }
  }
  return matches;
}

std::optional<double> average_precision(std::span<const InstancePrediction> preds,
                                        std::span<const GroundTruthInstance> gts, int category,
                                        double iou_threshold) {
  std::vector<GroundTruthInstance> cat_gts;
  for (const auto& g : gts) {
    if (g.category_id == category) cat_gts.push_back(g);
  }
  if (cat_gts.empty()) return std::nullopt;
  std::vector<InstancePrediction> cat_preds;
  for (const auto& p : preds) {
    if (p.category() == category) cat_preds.push_back(p);
  }
  const auto matches = match_predictions(cat_preds, cat_gts, iou_threshold, true);
  std::vector<bool> is_tp(cat_preds.size(), false);
  for (const auto& m : matches) is_tp[m.pred_index] = true;
  std::vector<bool> tp_in_order;
  tp_in_order.reserve(cat_preds.size());
  for (std::size_t p : confidence_order(cat_preds)) tp_in_order.push_back(is_tp[p]);
  return interpolated_ap(tp_in_order, cat_gts.size());
}

double mean_matched_iou(std::span<const InstancePrediction> preds,
                        std::span<const GroundTruthInstance> gts) {
  if (gts.empty()) return 0.0;
  std::unordered_map<std::string, std::vector<std::size_t>> preds_by_image;
  for (std::size_t i = 0; i < preds.size(); ++i) preds_by_image[preds[i].image_id].push_back(i);

  struct Pair {
    double iou;
    std::size_t gt;
    std::size_t pred;
  };
  double total = 0.0;
  for (const auto& [image, gt_idx] : index_by_image(gts)) {
    const auto it = preds_by_image.find(image);
    if (it == preds_by_image.end()) continue;
    std::vector<Pair> pairs;
    for (std::size_t g : gt_idx) {
      for (std::size_t p : it->second) {
        const double iou = riou(preds[p].box, gts[g].box);
        if (iou > 0.0) pairs.push_back({iou, g, p});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (a.iou != b.iou) return a.iou > b.iou;
      if (gts[a.gt].instance_id != gts[b.gt].instance_id) return gts[a.gt].instance_id < gts[b.gt].instance_id;
      if (a.gt != b.gt) return a.gt < b.gt;
      return a.pred < b.pred;
    });
    std::set<std::size_t> used_gt;
    std::set<std::size_t> used_pred;
    for (const auto& pr : pairs) {
      if (used_gt.count(pr.gt) || used_pred.count(pr.pred)) continue;
      used_gt.insert(pr.gt);
      used_pred.insert(pr.pred);
      total += pr.iou;
    }
  }
  return total / static_cast<double>(gts.size());
}

DetectionMetrics evaluate_detections(std::span<const InstancePrediction> preds,
                                     std::span<const GroundTruthInstance> gts) {
  if (gts.empty()) throw InvalidInput("evaluate_detections: empty ground truth");
  DetectionMetrics m;
  std::set<int> categories;
  for (const auto& g : gts) categories.insert(g.category_id);
  double sum = 0.0;
  for (int c : categories) {
    const double ap = average_precision(preds, gts, c).value_or(0.0);
    m.ap[c] = ap;
    sum += ap;
  }
  m.map50 = sum / static_cast<double>(categories.size());
  m.mean_iou = mean_matched_iou(preds, gts);
  return m;
}

std::vector<int> rare_categories(std::span<const std::int64_t> labeled_counts, double rare_quantile) {
  if (labeled_counts.empty()) throw InvalidInput("rare_categories: no categories");
  if (!(rare_quantile >= 0.0 && rare_quantile <= 1.0)) {
    throw InvalidInput("rare_categories: quantile must lie in [0, 1]");
  }
  std::vector<std::int64_t> sorted(labeled_counts.begin(), labeled_counts.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = rare_quantile * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double threshold = static_cast<double>(sorted[lo]) +
                           (pos - static_cast<double>(lo)) * static_cast<double>(sorted[hi] - sorted[lo]);
  std::vector<int> rare;
  for (std::size_t c = 0; c < labeled_counts.size(); ++c) {
    if (static_cast<double>(labeled_counts[c]) <= threshold + 1e-9) rare.push_back(static_cast<int>(c));
  }
  return rare;
}

AbilityReport ability_vector(std::span<const InstancePrediction> eval_preds,
                             std::span<const GroundTruthInstance> eval_gts,
                             std::span<const std::int64_t> labeled_counts, const ObservationConfig& config) {
  if (eval_gts.empty()) throw InvalidInput("ability_vector: empty evaluation set");
  AbilityReport report;
  report.rare = rare_categories(labeled_counts, config.rare_quantile);

  std::set<int> present;
  for (const auto& g : eval_gts) present.insert(g.category_id);

  double ap_sum = 0.0;
  for (int c : present) {
    report.ap[c] = average_precision(eval_preds, eval_gts, c).value_or(0.0);
    ap_sum += report.ap[c];
  }
  report.ability.a_cls = ap_sum / static_cast<double>(present.size());
  report.ability.a_loc = mean_matched_iou(eval_preds, eval_gts);

  double rare_sum = 0.0;
  std::size_t rare_present = 0;
  for (int c : report.rare) {
    const auto it = report.ap.find(c);
    if (it == report.ap.end()) continue;
    rare_sum += it->second;
    ++rare_present;
  }
  if (rare_present > 0) {
    report.ability.a_inter = config.inter_aggregate == InterAggregate::kMean
                                 ? rare_sum / static_cast<double>(rare_present)
                                 : rare_sum;
  }
  report.ability.a_inter = std::clamp(report.ability.a_inter, 0.0, 1.0);

  // Per-category accuracy and confidence spread over class-agnostic matches at RIoU >= 0.5.
  std::map<int, std::vector<std::pair<bool, double>>> per_category;
  for (const auto& m : match_predictions(eval_preds, eval_gts, 0.5, false)) {
    const auto& pred = eval_preds[m.pred_index];
    const int truth = eval_gts[m.gt_index].category_id;
    per_category[truth].emplace_back(pred.category() == truth, pred.confidence());
  }
  double intra_sum = 0.0;
  for (const auto& [c, entries] : per_category) {
    const double n = static_cast<double>(entries.size());
    double correct = 0.0;
    double mean = 0.0;
    for (const auto& [ok, conf] : entries) {
      correct += ok ? 1.0 : 0.0;
      mean += conf;
    }
    mean /= n;
    double var = 0.0;
    for (const auto& e : entries) var += (e.second - mean) * (e.second - mean);
    var /= n;
    intra_sum += (correct / n) * std::exp(-var);
  }
  report.ability.a_intra = std::clamp(intra_sum / static_cast<double>(present.size()), 0.0, 1.0);
  return report;
}

std::array<double, 4> mso_weights(const AbilityVector& a) {
  const auto abilities = a.as_array();
  std::array<double, 4> w{};
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    w[i] = std::exp(1.0 - abilities[i]);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

double composite_score(const std::array<double, 4>& u, const AbilityVector& a) {
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("composite_score: score outside [0, 1]");
  }
  const auto w = mso_weights(a);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += w[i] * u[i];
  return std::clamp(s, 0.0, 1.0);
}

double final_score(double s, double a_bar) { return a_bar * s + (1.0 - a_bar) * (1.0 - s); }

}  // namespace activeobb
