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
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "activeobb/config.hpp"
#include "activeobb/observation.hpp"
#include "activeobb/selector.hpp"

namespace activeobb::sim {

// Every constant of the synthetic world and detector. Field names double as
// sim_config.json keys.
struct SimConfig {
  // Dataset.
  int num_categories = 15;
  int num_instances = 20000;
  int feature_dim = 32;
  double zipf_exponent = 1.1;
  int modes = 3;
  int instances_per_image = 20;
  double canvas = 1024.0;
  double min_size = 8.0;
  double max_size = 256.0;
  double initial_fraction = 0.01;
  int test_instances = 6000;
  int heldout_instances = 1000;
  double mode_scale = 0.6;
  double feature_noise = 0.35;

  // Detector dynamics.
  double base_skill = 0.2;
  double lambda_cls = 0.05;
  double lambda_loc = 0.02;
  double sigma_lup = 0.05;
  double difficulty_penalty = 0.4;
  // Fraction of the remaining skill gap closed on instances the detector was trained on.
  double train_fit = 0.7;
  double concentration = 30.0;
  double background_concentration = 0.3;
  double center_noise = 0.3;
  double size_noise = 0.35;
  double angle_noise = 0.5;
  double feature_pred_noise = 0.1;

  // Selection loop.
  RunConfig run{.budget = 200};

  void validate() const;
};

nlohmann::json to_json(const SimConfig& config);
// Unknown keys are rejected; run-config keys are read into `run`.
SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base = {});

struct SyntheticInstance {
  GroundTruthInstance gt;
  double difficulty = 0.0;  // Beta(2, 2)
  int mode = 0;
  FeatureVector feature;
};

struct Dataset {
  std::vector<SyntheticInstance> train;
  std::vector<SyntheticInstance> test;
  std::vector<SyntheticInstance> heldout;
  std::vector<std::string> initial_labeled;

  std::vector<std::string> train_ids() const;
};

// Category sampling weights of the long tail, normalized.
std::vector<double> zipf_weights(int num_categories, double exponent);

// Deterministic in (config, seed). The initial labeled set is a random
// initial_fraction of train plus one instance of every category missing from it.
Dataset generate_dataset(const SimConfig& config, std::uint64_t seed);

// Difficulty bucket 0, 1 or 2 (cut points 1/3 and 2/3).
int difficulty_tercile(double difficulty);

struct DetectorState {
  std::vector<double> cls_skill;       // per category
  std::array<double, 3> reg_skill{};   // per difficulty tercile
  double sigma_lup = 0.05;
  std::set<std::string> trained_on;    // labeled ids at the last retrain
  std::uint64_t seed = 0;
  int generation = 0;                  // retrain count; keys the noise stream
};

// Initial (untrained) state: every skill at base_skill.
DetectorState initial_detector(const SimConfig& config, std::uint64_t seed);

// Skills from labeled counts by true category and by difficulty tercile.
DetectorState retrain(const DetectorState& state, std::span<const SyntheticInstance> labeled,
                      const SimConfig& config);

// One prediction per instance, linked by instance_id. Noise streams are keyed
// by (seed, generation, instance id), so the output is order-independent.
std::vector<InstancePrediction> detector_predict(const DetectorState& state,
                                                 std::span<const SyntheticInstance> instances,
                                                 const SimConfig& config);

// ModelAdapter over a synthetic dataset and the responsive detector.
class SimulatedAdapter : public ModelAdapter {
 public:
  SimulatedAdapter(const Dataset& dataset, const SimConfig& config, std::uint64_t seed);

  std::vector<InstancePrediction> predict_unlabeled(const LabelPool& pool) override;
  std::vector<InstancePrediction> predict_eval(std::span<const GroundTruthInstance> eval_set,
                                               const LabelPool& pool) override;
  std::optional<GroundTruthInstance> ground_truth(const std::string& instance_id) const override;
  std::vector<GroundTruthInstance> heldout_set() const override;
  void retrain(const LabelPool& pool) override;

  const DetectorState& state() const { return state_; }
  const SyntheticInstance& instance(const std::string& id) const;

 private:
  std::vector<SyntheticInstance> gather(const std::set<std::string>& ids) const;

  const Dataset& dataset_;
  SimConfig config_;
  DetectorState state_;
  std::unordered_map<std::string, std::size_t> train_index_;
  std::unordered_map<std::string, std::size_t> heldout_index_;
};

// Round state after initial annotation: pool, counts and mean prototypes
// from the adapter's predicted features of the labeled instances.
RoundState initial_round_state(const Dataset& dataset, SimulatedAdapter& adapter, const SimConfig& config);

enum class Strategy { kActive, kRandom, kStatic };
std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

// Gini coefficient of non-negative counts (0 = perfectly even).
double gini(std::span<const std::int64_t> counts);

struct SeedResult {
  std::uint64_t seed = 0;
  double map50 = 0.0;
  std::vector<AbilityVector> trajectory;
  std::vector<std::int64_t> labeled_per_category;  // by true category
  double gini = 0.0;
  std::vector<std::size_t> selected_per_round;
  std::vector<std::string> labeled_ids;
};

struct ExperimentReport {
  Strategy strategy = Strategy::kActive;
  std::vector<SeedResult> seeds;
  double mean_map50 = 0.0;
  double variance_map50 = 0.0;  // population variance over seeds
};

SeedResult run_seed(Strategy strategy, std::uint64_t seed, const SimConfig& config);

// Seeds run concurrently; results are reported in input order.
ExperimentReport run_experiment(Strategy strategy, std::span<const std::uint64_t> seeds, const SimConfig& config);

nlohmann::json to_json(const ExperimentReport& report, const SimConfig& config);
// Rows: strategy, seed, round, a_cls, a_loc, a_inter, a_intra, a_bar.
std::string trajectory_csv(const ExperimentReport& report);

}  // namespace activeobb::sim
