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

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "activeobb/config.hpp"
#include "activeobb/diversity.hpp"
#include "activeobb/observation.hpp"

namespace activeobb {

// Disjoint labeled/unlabeled partition of a dataset's instance ids.
class LabelPool {
 public:
  LabelPool() = default;
  // Every id in `labeled` must occur in `all_ids`.
  LabelPool(std::span<const std::string> all_ids, std::span<const std::string> labeled);

  const std::set<std::string>& labeled() const { return labeled_; }
  const std::set<std::string>& unlabeled() const { return unlabeled_; }
  int round() const { return round_; }
  std::size_t size() const { return labeled_.size() + unlabeled_.size(); }

  // Throws InvalidInput if any id is not currently unlabeled; no partial moves.
  void label(std::span<const std::string> ids);
  void advance_round() { ++round_; }
  void set_round(int round) { round_ = round; }

 private:
  std::set<std::string> labeled_;
  std::set<std::string> unlabeled_;
  int round_ = 0;
};

struct SelectionRecord {
  std::string instance_id;
  int rank = 0;  // 1-based pick order
  ScoreBreakdown breakdown;
};

// Scores an unlabeled candidate against the current prototypes/counts.
// Uses the predicted loc/orient uncertainty; ground truth is not consulted.
ScoreBreakdown score_candidate(const InstancePrediction& pred, const PrototypeStore& store,
                               const AbilityVector& ability);

// Picks `budget` candidates. Greedy mode re-scores same-pseudo-category
// candidates after every pick (EMA prototype update, count increment); static
// mode ranks once and applies the updates afterwards; random mode draws a
// uniform subset from `random_seed`. Ties: s_final desc, then s desc, then
// instance_id asc. `store` is updated in place.
std::vector<SelectionRecord> greedy_select(std::span<const InstancePrediction> candidates,
                                           PrototypeStore& store, const AbilityVector& ability,
                                           std::size_t budget,
                                           SelectionMode mode = SelectionMode::kGreedy,
                                           std::uint64_t random_seed = 0);

using AnnotationOracle = std::function<std::optional<GroundTruthInstance>(const std::string&)>;

struct AnnotationResult {
  std::vector<std::string> labeled_ids;
  std::size_t corrections = 0;  // picks whose true category differed from the pseudo-category
};

// Moves picks into the labeled set and replaces pseudo-categories with true
// ones in the counts. Prototypes keep their EMA state. Picks the oracle cannot
// annotate keep their pseudo-category count.
AnnotationResult annotate(LabelPool& pool, std::span<const SelectionRecord> picks,
                          const AnnotationOracle& oracle, PrototypeStore& store);

// Detector integration point for the selection loop.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  // Exactly one prediction per unlabeled id, linked by instance_id.
  virtual std::vector<InstancePrediction> predict_unlabeled(const LabelPool& pool) = 0;
  // Predictions on the images of an evaluation set.
  virtual std::vector<InstancePrediction> predict_eval(std::span<const GroundTruthInstance> eval_set,
                                                       const LabelPool& pool) = 0;
  // Annotation oracle.
  virtual std::optional<GroundTruthInstance> ground_truth(const std::string& instance_id) const = 0;
  // Externally supplied evaluation set; empty when the adapter has none.
  virtual std::vector<GroundTruthInstance> heldout_set() const { return {}; }
  virtual void retrain(const LabelPool& pool) = 0;
};

// Everything carried between rounds.
struct RoundState {
  LabelPool pool;
  std::vector<std::string> initial_labeled;
  PrototypeStore store;
  std::optional<AbilityVector> ability;
};

struct RoundReport {
  int round = 0;
  AbilityReport observed;
  std::array<double, 4> weights{};
  std::vector<SelectionRecord> selections;
  std::size_t corrections = 0;
  std::size_t labeled_after = 0;
};

// Observes model state on the configured evaluation set.
AbilityReport observe(const RoundState& state, ModelAdapter& adapter, const RunConfig& config);

// observe -> score unlabeled -> select -> annotate -> retrain; round + 1.
// The budget is capped by the number of unlabeled instances.
RoundReport run_round(RoundState& state, ModelAdapter& adapter, const RunConfig& config);

struct LoopReport {
  std::vector<RoundReport> rounds;
  AbilityReport final_observation;  // state after the last retrain

  // a_bar at the start of every round followed by the final observation.
  std::vector<AbilityVector> trajectory() const;
};

LoopReport run_loop(RoundState& state, ModelAdapter& adapter, const RunConfig& config);

}  // namespace activeobb
