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

// Command-line front end: box debugging, model-state observation, candidate
// selection, detection evaluation and simulated experiments.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "activeobb/config.hpp"
#include "activeobb/error.hpp"
#include "activeobb/geometry.hpp"
#include "activeobb/io.hpp"
#include "activeobb/observation.hpp"
#include "activeobb/random.hpp"
#include "activeobb/selector.hpp"
#include "activeobb/simulator.hpp"

namespace {

using nlohmann::json;
using namespace activeobb;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitContract = 3;
constexpr const char* kConfigEnv = "ACTIVEOBB_CONFIG";

// Accepts "[cx, cy, w, h, theta]" or "cx,cy,w,h,theta".
RotatedBox parse_box_arg(const std::string& text) {
  std::string body = text;
  if (body.find('[') == std::string::npos) body = "[" + body + "]";
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    throw InvalidInput("cannot parse box '" + text + "'");
  }
  return box_from_json(j);
}

json load_config_file(const std::string& path) {
  if (!path.empty()) return read_json_file(path);
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return read_json_file(env);
  return json::object();
}

struct RunFlags {
  std::string config_path;
  std::optional<double> gamma, beta, alpha, rare_quantile;
  std::optional<int> rounds;
  std::optional<std::int64_t> budget;
  std::optional<std::string> selection, mso_eval, inter_aggregate;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* cmd, bool with_budget = true) {
    cmd->add_option("--config", config_path, "JSON config file (default: $" + std::string(kConfigEnv) + ")");
    cmd->add_option("--gamma", gamma, "inter-category smoothing");
    cmd->add_option("--beta", beta, "aspect-ratio sensitivity");
    cmd->add_option("--alpha", alpha, "prototype EMA momentum");
    cmd->add_option("--rare-quantile", rare_quantile, "rare-category count quantile");
    cmd->add_option("--inter-aggregate", inter_aggregate, "mean|sum");
    cmd->add_option("--selection", selection, "greedy|static");
    cmd->add_option("--mso-eval", mso_eval, "initial|current|heldout");
    cmd->add_option("--rounds", rounds, "active rounds");
    if (with_budget) cmd->add_option("--budget", budget, "instances selected per round");
  }

  void apply(RunConfig& c) const {
    if (gamma) c.gamma = *gamma;
    if (beta) c.beta = *beta;
    if (alpha) c.alpha = *alpha;
    if (rare_quantile) c.rare_quantile = *rare_quantile;
    if (rounds) c.rounds = *rounds;
    if (budget) c.budget = *budget;
    if (selection) c.selection = parse_selection_mode(*selection);
    if (mso_eval) c.mso_eval = parse_mso_eval(*mso_eval);
    if (inter_aggregate) c.inter_aggregate = parse_inter_aggregate(*inter_aggregate);
    if (seed) c.seed = *seed;
    c.validate();
  }

  RunConfig resolve() const {
    const json file = load_config_file(config_path);
    RunConfig c = run_config_from_json(file);
    apply(c);
    return c;
  }
};

int cmd_riou(const std::string& a_text, const std::string& b_text) {
  const RotatedBox a = parse_box_arg(a_text);
  const RotatedBox b = parse_box_arg(b_text);
  std::printf("riou=%.6f dtheta=%.6f\n", riou(a, b), angular_deviation(a, b));
  return kExitOk;
}

std::unordered_map<std::string, GroundTruthInstance> index_gt(std::vector<GroundTruthInstance> gts) {
  std::unordered_map<std::string, GroundTruthInstance> by_id;
  for (auto& g : gts) {
    auto id = g.instance_id;
    by_id.emplace(std::move(id), std::move(g));
  }
  return by_id;
}

int cmd_init(const RunConfig& config, const std::string& gt_path, const std::string& features_path,
             const std::string& candidates_path, int num_categories, const std::string& out) {
  const auto gts = read_ground_truth(gt_path);
  if (gts.empty()) throw InvalidInput(gt_path + ": no labeled instances");
  for (const auto& g : gts) {
    if (g.category_id >= num_categories) {
      throw InvalidInput("instance " + g.instance_id + ": category_id outside [0, num_categories)");
    }
  }
  const auto gt_by_id = index_gt(gts);

  std::vector<std::pair<int, FeatureVector>> features;
  for_each_jsonl(features_path, [&](const json& j, std::size_t) {
    auto pred = prediction_from_json(j);
    const auto it = gt_by_id.find(pred.instance_id);
    if (it != gt_by_id.end()) features.emplace_back(it->second.category_id, std::move(pred.feature));
  });
  if (features.empty()) throw InvalidInput(features_path + ": no features for labeled instances");
  auto store = init_prototypes(features, num_categories, config.alpha, config.gamma);
  // Counts follow the annotations, including instances without a feature record.
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_categories), 0);
  for (const auto& g : gts) ++counts[static_cast<std::size_t>(g.category_id)];
  for (int c = 0; c < num_categories; ++c) store.set_count(c, counts[static_cast<std::size_t>(c)]);

  std::vector<std::string> labeled;
  for (const auto& g : gts) labeled.push_back(g.instance_id);
  std::vector<std::string> all = labeled;
  if (!candidates_path.empty()) {
    std::unordered_set<std::string> seen(labeled.begin(), labeled.end());
    for_each_jsonl(candidates_path, [&](const json& j, std::size_t) {
      const auto id = j.value("instance_id", std::string());
      if (id.empty()) throw InvalidInput("candidate without instance_id");
      if (seen.insert(id).second) all.push_back(id);
    });
  }
  RoundState state{LabelPool(all, labeled), labeled, std::move(store), std::nullopt};
  write_json_file(out, state_to_json(state, to_json(config)));
  return kExitOk;
}

int cmd_observe(const RunConfig& config, const std::string& preds_path, const std::string& gt_path,
                const std::string& state_path, const std::string& out) {
  const auto state = state_from_json(read_json_file(state_path), config.alpha, config.gamma);
  const auto gts = read_ground_truth(gt_path);
  const auto preds = read_predictions(preds_path);
  for (const auto& p : preds) {
    if (static_cast<int>(p.probs.size()) != state.store.num_categories()) {
      throw InvalidInput("prediction " + p.instance_id + ": category count differs from state");
    }
  }
  const auto report = ability_vector(preds, gts, state.store.counts(), config.observation());
  json j = ability_report_json(report);
  j["config"] = to_json(config);
  write_json_file(out, j);
  return kExitOk;
}

int cmd_select(const RunConfig& config, const std::string& preds_path, const std::string& gt_path,
               const std::string& state_path, const std::string& ability_path, const std::string& out_dir) {
  RoundState state = state_from_json(read_json_file(state_path), config.alpha, config.gamma);

  AbilityVector ability;
  if (!ability_path.empty()) {
    ability = ability_from_json(read_json_file(ability_path));
  } else if (state.ability) {
    ability = *state.ability;
  } else {
    throw ContractViolation("no observed model state: pass --ability or observe first");
  }

  const bool known_candidates = !state.pool.unlabeled().empty();
  std::vector<InstancePrediction> candidates;
  std::unordered_set<std::string> seen;
  for_each_jsonl(preds_path, [&](const json& j, std::size_t line) {
    auto pred = prediction_from_json(j);
    if (state.pool.labeled().count(pred.instance_id)) return;
    if (pred.instance_id.empty()) throw InvalidInput("candidate without instance_id");
    if (known_candidates && !state.pool.unlabeled().count(pred.instance_id)) {
      throw ContractViolation(preds_path + ":" + std::to_string(line) + ": id '" + pred.instance_id +
                              "' is not in the state's unlabeled set");
    }
    if (!seen.insert(pred.instance_id).second) {
      throw ContractViolation(preds_path + ":" + std::to_string(line) + ": duplicate prediction for '" +
                              pred.instance_id + "'");
    }
    if (static_cast<int>(pred.probs.size()) != state.store.num_categories()) {
      throw ContractViolation(preds_path + ":" + std::to_string(line) + ": category count differs from state");
    }
    candidates.push_back(std::move(pred));
  });
  if (known_candidates && seen.size() != state.pool.unlabeled().size()) {
    throw ContractViolation("predictions cover " + std::to_string(seen.size()) + " of " +
                            std::to_string(state.pool.unlabeled().size()) + " unlabeled instances");
  }
  if (!known_candidates) {
    std::vector<std::string> all(state.pool.labeled().begin(), state.pool.labeled().end());
    all.insert(all.end(), seen.begin(), seen.end());
    const std::vector<std::string> labeled(state.pool.labeled().begin(), state.pool.labeled().end());
    const int round = state.pool.round();
    state.pool = LabelPool(all, labeled);
    state.pool.set_round(round);
  }

  std::unordered_map<std::string, GroundTruthInstance> annotations;
  if (!gt_path.empty()) annotations = index_gt(read_ground_truth(gt_path));

  const auto budget = std::min<std::size_t>(static_cast<std::size_t>(config.budget), candidates.size());
  std::vector<SelectionRecord> picks;
  if (budget > 0) {
    picks = greedy_select(candidates, state.store, ability, budget, config.selection,
                          stream_seed(config.seed, "random-strategy", static_cast<std::uint64_t>(state.pool.round())));
    const AnnotationOracle oracle = [&](const std::string& id) -> std::optional<GroundTruthInstance> {
      const auto it = annotations.find(id);
      if (it == annotations.end()) return std::nullopt;
      return it->second;
    };
    annotate(state.pool, picks, oracle, state.store);
  }
  state.ability = ability;
  state.pool.advance_round();

  std::vector<json> lines;
  for (const auto& p : picks) lines.push_back(to_json(p));
  const std::filesystem::path dir(out_dir);
  write_jsonl_file(dir / "selection.jsonl", lines);
  write_json_file(dir / "state.json", state_to_json(state, to_json(config)));
  return kExitOk;
}

int cmd_evaluate(const std::string& preds_path, const std::string& gt_path, const std::string& out) {
  const auto gts = read_ground_truth(gt_path);
  if (gts.empty()) throw InvalidInput(gt_path + ": empty ground truth");
  const auto preds = read_predictions(preds_path);
  write_json_file(out, to_json(evaluate_detections(preds, gts)));
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const RunFlags& flags, const std::string& strategy,
                 std::uint64_t seed, int num_seeds, const std::string& out, const std::string& csv) {
  const json file = load_config_file(config_path);
  sim::SimConfig config = sim::sim_config_from_json(file);
  flags.apply(config.run);
  config.validate();
  if (num_seeds < 1) throw InvalidInput("--seeds must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < num_seeds; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
  const auto report = sim::run_experiment(sim::parse_strategy(strategy), seeds, config);
  write_json_file(out, sim::to_json(report, config));
  if (!csv.empty()) write_text_file(csv, sim::trajectory_csv(report));
  std::printf("strategy=%s mean_map50=%.6f variance=%.6f\n", strategy.c_str(), report.mean_map50,
              report.variance_map50);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instance-level active selection for sparsely annotated oriented object detection"};
  app.require_subcommand(1);

  std::string box_a, box_b;
  auto* riou_cmd = app.add_subcommand("riou", "Rotated IoU and angular deviation of two boxes");
  riou_cmd->add_option("--a", box_a, "box [cx, cy, w, h, theta]")->required();
  riou_cmd->add_option("--b", box_b, "box [cx, cy, w, h, theta]")->required();

  RunFlags init_flags;
  std::string init_gt, init_features, init_candidates, init_out;
  int init_categories = 0;
  auto* init_cmd = app.add_subcommand("init", "Create round-0 state from sparse annotations");
  init_flags.add_to(init_cmd, false);
  init_cmd->add_option("--gt", init_gt, "labeled instances (gt.jsonl)")->required();
  init_cmd->add_option("--features", init_features, "predictions carrying features of labeled instances")->required();
  init_cmd->add_option("--candidates", init_candidates, "predictions.jsonl whose ids form the unlabeled pool");
  init_cmd->add_option("--num-categories", init_categories, "number of categories")->required();
  init_cmd->add_option("--out", init_out, "state.json path")->required();

  RunFlags observe_flags;
  std::string obs_preds, obs_gt, obs_state, obs_out;
  auto* observe_cmd = app.add_subcommand("observe", "Observe model state (ability.json)");
  observe_flags.add_to(observe_cmd, false);
  observe_cmd->add_option("--predictions", obs_preds, "eval_predictions.jsonl")->required();
  observe_cmd->add_option("--gt", obs_gt, "evaluation ground truth (gt.jsonl)")->required();
  observe_cmd->add_option("--state", obs_state, "state.json")->required();
  observe_cmd->add_option("--out", obs_out, "ability.json path")->required();

  RunFlags select_flags;
  std::string sel_preds, sel_gt, sel_state, sel_ability, sel_out;
  auto* select_cmd = app.add_subcommand("select", "Select candidates for annotation and advance the state");
  select_flags.add_to(select_cmd);
  select_cmd->add_option("--seed", select_flags.seed, "seed for random selection");
  select_cmd->add_option("--predictions", sel_preds, "predictions.jsonl for unlabeled instances")->required();
  select_cmd->add_option("--gt", sel_gt, "annotations of selected instances (gt.jsonl)");
  select_cmd->add_option("--state", sel_state, "state.json")->required();
  select_cmd->add_option("--ability", sel_ability, "ability.json (default: ability stored in the state)");
  select_cmd->add_option("--out", sel_out, "output directory for selection.jsonl and state.json")->required();

  std::string ev_preds, ev_gt, ev_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Per-category AP, mAP50 and mean IoU");
  evaluate_cmd->add_option("--predictions", ev_preds, "predictions.jsonl")->required();
  evaluate_cmd->add_option("--gt", ev_gt, "gt.jsonl")->required();
  evaluate_cmd->add_option("--out", ev_out, "metrics.json path")->required();

  RunFlags sim_flags;
  std::string sim_config, sim_strategy = "active", sim_out, sim_csv;
  std::uint64_t sim_seed = 0;
  int sim_seeds = 5;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the synthetic active-learning experiment");
  sim_flags.add_to(simulate_cmd);
  simulate_cmd->add_option("--strategy", sim_strategy, "active|random|static");
  simulate_cmd->add_option("--seed", sim_seed, "first seed")->required();
  simulate_cmd->add_option("--seeds", sim_seeds, "number of consecutive seeds");
  simulate_cmd->add_option("--out", sim_out, "report.json path")->required();
  simulate_cmd->add_option("--csv", sim_csv, "optional trajectory CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (riou_cmd->parsed()) return cmd_riou(box_a, box_b);
    if (init_cmd->parsed()) {
      return cmd_init(init_flags.resolve(), init_gt, init_features, init_candidates, init_categories, init_out);
    }
    if (observe_cmd->parsed()) return cmd_observe(observe_flags.resolve(), obs_preds, obs_gt, obs_state, obs_out);
    if (select_cmd->parsed()) {
      return cmd_select(select_flags.resolve(), sel_preds, sel_gt, sel_state, sel_ability, sel_out);
    }
    if (evaluate_cmd->parsed()) return cmd_evaluate(ev_preds, ev_gt, ev_out);
    if (simulate_cmd->parsed()) {
      return cmd_simulate(sim_flags.config_path, sim_flags, sim_strategy, sim_seed, sim_seeds, sim_out, sim_csv);
    }
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
