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

#include "activeobb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <random>
#include <set>

#include "activeobb/error.hpp"
#include "activeobb/io.hpp"
#include "activeobb/random.hpp"

namespace activeobb::sim {

using nlohmann::json;

void SimConfig::validate() const {
  if (num_categories < 2) throw InvalidInput("sim config: num_categories must be >= 2");
  if (num_instances < num_categories) throw InvalidInput("sim config: num_instances must be >= num_categories");
  if (feature_dim < 1) throw InvalidInput("sim config: feature_dim must be >= 1");
  if (modes < 1) throw InvalidInput("sim config: modes must be >= 1");
  if (instances_per_image < 1) throw InvalidInput("sim config: instances_per_image must be >= 1");
  if (!(zipf_exponent >= 0.0)) throw InvalidInput("sim config: zipf_exponent must be >= 0");
  if (!(canvas > 0.0)) throw InvalidInput("sim config: canvas must be > 0");
  if (!(min_size > 0.0 && max_size >= min_size)) throw InvalidInput("sim config: need 0 < min_size <= max_size");
  if (!(initial_fraction >= 0.0 && initial_fraction <= 1.0)) {
    throw InvalidInput("sim config: initial_fraction must lie in [0, 1]");
  }
  if (test_instances < num_categories) throw InvalidInput("sim config: test_instances must be >= num_categories");
  if (heldout_instances < 0) throw InvalidInput("sim config: heldout_instances must be >= 0");
  if (!(base_skill >= 0.0 && base_skill <= 1.0)) throw InvalidInput("sim config: base_skill must lie in [0, 1]");
  if (!(lambda_cls >= 0.0) || !(lambda_loc >= 0.0)) throw InvalidInput("sim config: lambdas must be >= 0");
  if (!(sigma_lup >= 0.0)) throw InvalidInput("sim config: sigma_lup must be >= 0");
  if (!(difficulty_penalty >= 0.0 && difficulty_penalty <= 1.0)) {
    throw InvalidInput("sim config: difficulty_penalty must lie in [0, 1]");
  }
  if (!(train_fit >= 0.0 && train_fit <= 1.0)) throw InvalidInput("sim config: train_fit must lie in [0, 1]");
  if (!(concentration >= 0.0) || !(background_concentration > 0.0)) {
    throw InvalidInput("sim config: concentrations must be positive");
  }
  if (!(center_noise >= 0.0) || !(size_noise >= 0.0) || !(angle_noise >= 0.0) || !(feature_noise >= 0.0) ||
      !(feature_pred_noise >= 0.0) || !(mode_scale >= 0.0)) {
    throw InvalidInput("sim config: noise scales must be >= 0");
  }
  run.validate();
}

#define ACTIVEOBB_SIM_FIELDS(X)                                                                          \
  X(num_categories) X(num_instances) X(feature_dim) X(zipf_exponent) X(modes) X(instances_per_image)     \
  X(canvas) X(min_size) X(max_size) X(initial_fraction) X(test_instances) X(heldout_instances)           \
  X(mode_scale) X(feature_noise) X(base_skill) X(lambda_cls) X(lambda_loc) X(sigma_lup)                  \
  X(difficulty_penalty) X(train_fit) X(concentration) X(background_concentration) X(center_noise) X(size_noise)      \
  X(angle_noise) X(feature_pred_noise)

namespace {

template <typename T>
json field_value(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    return round9(v);
  } else {
    return v;
  }
}

}  // namespace

json to_json(const SimConfig& config) {
  json j = activeobb::to_json(config.run);
#define X(name) j[#name] = field_value(config.name);
  ACTIVEOBB_SIM_FIELDS(X)
#undef X
  return j;
}

SimConfig sim_config_from_json(const json& j, SimConfig base) {
  if (!j.is_object()) throw InvalidInput("sim config: expected a JSON object");
  std::set<std::string> known;
#define X(name) known.insert(#name);
  ACTIVEOBB_SIM_FIELDS(X)
#undef X
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key) && !is_run_config_key(key)) throw InvalidInput("sim config: unknown key '" + key + "'");
  }
  try {
#define X(name) \
  if (j.contains(#name)) base.name = j.at(#name).get<decltype(base.name)>();
    ACTIVEOBB_SIM_FIELDS(X)
#undef X
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sim config: ") + e.what());
  }
  base.run = run_config_from_json(j, base.run);
  base.validate();
  return base;
}

#undef ACTIVEOBB_SIM_FIELDS

std::vector<std::string> Dataset::train_ids() const {
  std::vector<std::string> ids;
  ids.reserve(train.size());
  for (const auto& s : train) ids.push_back(s.gt.instance_id);
  return ids;
}

std::vector<double> zipf_weights(int num_categories, double exponent) {
  std::vector<double> w(static_cast<std::size_t>(num_categories));
  for (int k = 0; k < num_categories; ++k) w[static_cast<std::size_t>(k)] = std::pow(k + 1.0, -exponent);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

namespace {

std::string format_id(const char* prefix, long long n, int width) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%0*lld", prefix, width, n);
  return buf;
}

std::vector<double> gaussian_vector(CounterRng& rng, int dim, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& x : v) x = normal(rng);
  return v;
}

void normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double n = std::sqrt(sq);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

struct FeatureBasis {
  std::vector<std::vector<double>> archetypes;            // [category]
  std::vector<std::vector<std::vector<double>>> offsets;  // [category][mode]
};

FeatureBasis make_basis(const SimConfig& config, std::uint64_t seed) {
  FeatureBasis basis;
  for (int c = 0; c < config.num_categories; ++c) {
    CounterRng rng(stream_seed(seed, "archetype", static_cast<std::uint64_t>(c)));
    auto a = gaussian_vector(rng, config.feature_dim, 1.0);
    normalize(a);
    basis.archetypes.push_back(std::move(a));
    std::vector<std::vector<double>> modes;
    for (int m = 0; m < config.modes; ++m) {
      CounterRng mrng(stream_seed(seed, "mode-offset", static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(m)));
      auto o = gaussian_vector(mrng, config.feature_dim, 1.0);
      normalize(o);
      for (double& x : o) x *= config.mode_scale;
      modes.push_back(std::move(o));
    }
    basis.offsets.push_back(std::move(modes));
  }
  return basis;
}

double beta22(CounterRng& rng) {
  std::gamma_distribution<double> g(2.0, 1.0);
  const double x = g(rng);
  const double y = g(rng);
  return x / (x + y);
}

SyntheticInstance make_instance(const SimConfig& config, const FeatureBasis& basis,
                                const std::vector<double>& cdf, std::uint64_t seed, const char* split,
                                const char* id_prefix, const char* image_prefix, long long index) {
  CounterRng rng(stream_seed(seed, split, static_cast<std::uint64_t>(index)));
  int category = 0;
  const double u = rng.uniform();
  // The first C instances of a split cover every category once.
  if (index < config.num_categories) {
    category = static_cast<int>(index);
  } else {
    category = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    category = std::min(category, config.num_categories - 1);
  }
  const double cx = rng.uniform() * config.canvas;
  const double cy = rng.uniform() * config.canvas;
  const double log_min = std::log(config.min_size);
  const double log_span = std::log(config.max_size) - log_min;
  const double w = std::exp(log_min + rng.uniform() * log_span);
  const double h = std::exp(log_min + rng.uniform() * log_span);
  const double theta = -kHalfPi + rng.uniform() * kPi;
  const double difficulty = beta22(rng);
  const int mode = static_cast<int>(rng() % static_cast<std::uint64_t>(config.modes));

  auto f = gaussian_vector(rng, config.feature_dim, config.feature_noise);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] += basis.archetypes[static_cast<std::size_t>(category)][i] +
            basis.offsets[static_cast<std::size_t>(category)][static_cast<std::size_t>(mode)][i];
  }
  normalize(f);

  GroundTruthInstance gt{format_id(image_prefix, index / config.instances_per_image, 5),
                         format_id(id_prefix, index, 6), category, RotatedBox(cx, cy, w, h, theta)};
  return SyntheticInstance{std::move(gt), difficulty, mode, FeatureVector(std::move(f))};
}

std::vector<SyntheticInstance> make_split(const SimConfig& config, const FeatureBasis& basis,
                                          const std::vector<double>& cdf, std::uint64_t seed, const char* split,
                                          const char* id_prefix, const char* image_prefix, int count) {
  std::vector<SyntheticInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(make_instance(config, basis, cdf, seed, split, id_prefix, image_prefix, i));
  }
  return out;
}

}  // namespace

Dataset generate_dataset(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  const auto weights = zipf_weights(config.num_categories, config.zipf_exponent);
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  const auto basis = make_basis(config, seed);

  Dataset d;
  d.train = make_split(config, basis, cdf, seed, "train", "i", "img", config.num_instances);
  d.test = make_split(config, basis, cdf, seed, "test", "t", "timg", config.test_instances);
  d.heldout = make_split(config, basis, cdf, seed, "heldout", "h", "himg", config.heldout_instances);

  // Random initial_fraction of the training pool, then one-per-category top-up.
  const auto n = d.train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(stream_seed(seed, "initial-labels"));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  const auto take = static_cast<std::size_t>(std::llround(config.initial_fraction * static_cast<double>(n)));
  std::vector<bool> chosen(n, false);
  std::vector<bool> covered(static_cast<std::size_t>(config.num_categories), false);
  for (std::size_t i = 0; i < take; ++i) {
    chosen[order[i]] = true;
    covered[static_cast<std::size_t>(d.train[order[i]].gt.category_id)] = true;
  }
  for (std::size_t i = take; i < n; ++i) {
    const auto c = static_cast<std::size_t>(d.train[order[i]].gt.category_id);
    if (!covered[c]) {
      covered[c] = true;
      chosen[order[i]] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) d.initial_labeled.push_back(d.train[i].gt.instance_id);
  }
  return d;
}

int difficulty_tercile(double difficulty) {
  if (difficulty < 1.0 / 3.0) return 0;
  if (difficulty < 2.0 / 3.0) return 1;
  return 2;
}

DetectorState initial_detector(const SimConfig& config, std::uint64_t seed) {
  DetectorState s;
  s.cls_skill.assign(static_cast<std::size_t>(config.num_categories), config.base_skill);
  s.reg_skill.fill(config.base_skill);
  s.sigma_lup = config.sigma_lup;
  s.seed = seed;
  return s;
}

DetectorState retrain(const DetectorState& state, std::span<const SyntheticInstance> labeled,
                      const SimConfig& config) {
  std::vector<double> per_category(state.cls_skill.size(), 0.0);
  std::array<double, 3> per_tercile{};
  for (const auto& s : labeled) {
    per_category[static_cast<std::size_t>(s.gt.category_id)] += 1.0;
    per_tercile[static_cast<std::size_t>(difficulty_tercile(s.difficulty))] += 1.0;
  }
  DetectorState next = state;
  next.trained_on.clear();
  for (const auto& s : labeled) next.trained_on.insert(s.gt.instance_id);
  for (std::size_t c = 0; c < per_category.size(); ++c) {
    next.cls_skill[c] = 1.0 - (1.0 - config.base_skill) * std::exp(-config.lambda_cls * per_category[c]);
  }
  for (std::size_t t = 0; t < 3; ++t) {
    next.reg_skill[t] = 1.0 - (1.0 - config.base_skill) * std::exp(-config.lambda_loc * per_tercile[t]);
  }
  ++next.generation;
  return next;
}

std::vector<InstancePrediction> detector_predict(const DetectorState& state,
                                                 std::span<const SyntheticInstance> instances,
                                                 const SimConfig& config) {
  const auto num_categories = static_cast<int>(state.cls_skill.size());
  std::vector<InstancePrediction> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    CounterRng rng(stream_seed(state.seed, "detector", static_cast<std::uint64_t>(state.generation),
                               fnv1a64(inst.gt.instance_id)));
    std::normal_distribution<double> normal(0.0, 1.0);
    const int truth = inst.gt.category_id;
    const double fit = state.trained_on.count(inst.gt.instance_id) ? config.train_fit : 0.0;
    const double skill = 1.0 - (1.0 - state.cls_skill[static_cast<std::size_t>(truth)]) * (1.0 - fit);

    // The correctness draw is a latent per-instance quantile, fixed across retrains.
    const double luck = CounterRng(stream_seed(state.seed, "detector-luck", fnv1a64(inst.gt.instance_id))).uniform();
    const double p_correct = skill * (1.0 - config.difficulty_penalty * inst.difficulty);
    const bool correct = luck < p_correct;
    const int peak = correct ? truth : (truth + 1) % num_categories;

    std::vector<double> probs(static_cast<std::size_t>(num_categories));
    double total = 0.0;
    for (int c = 0; c < num_categories; ++c) {
      const double shape = config.background_concentration + (c == peak ? config.concentration * skill : 0.0);
      std::gamma_distribution<double> g(shape, 1.0);
      probs[static_cast<std::size_t>(c)] = g(rng);
      total += probs[static_cast<std::size_t>(c)];
    }
    if (!(total > 0.0)) {
      std::fill(probs.begin(), probs.end(), 0.0);
      probs[static_cast<std::size_t>(peak)] = 1.0;
      total = 1.0;
    }
    for (double& p : probs) p /= total;
    const auto top = std::max_element(probs.begin(), probs.end());
    std::iter_swap(top, probs.begin() + peak);

    const double reg =
        1.0 - (1.0 - state.reg_skill[static_cast<std::size_t>(difficulty_tercile(inst.difficulty))]) * (1.0 - fit);
    const double k = (1.0 - reg) * (1.0 + inst.difficulty);
    const auto& g = inst.gt.box;
    const double short_side = std::min(g.w(), g.h());
    const double cx = g.cx() + config.center_noise * k * short_side * normal(rng);
    const double cy = g.cy() + config.center_noise * k * short_side * normal(rng);
    const double w = g.w() * std::exp(config.size_noise * k * normal(rng));
    const double h = g.h() * std::exp(config.size_noise * k * normal(rng));
    const double theta = g.theta() + config.angle_noise * k * normal(rng);
    RotatedBox box(cx, cy, w, h, theta);

    std::vector<double> feature = inst.feature.values();
    for (double& x : feature) x += config.feature_pred_noise * normal(rng);

    const double target = loc_orient_target(box, g, config.run.beta).u_fused;
    const double lup = std::clamp(target + state.sigma_lup * normal(rng), 0.0, 1.0);

    out.push_back(InstancePrediction{inst.gt.image_id, inst.gt.instance_id, box,
                                     CategoryDistribution(std::move(probs)), FeatureVector(std::move(feature)),
                                     lup});
  }
  return out;
}

SimulatedAdapter::SimulatedAdapter(const Dataset& dataset, const SimConfig& config, std::uint64_t seed)
    : dataset_(dataset), config_(config), state_(initial_detector(config, seed)) {
  for (std::size_t i = 0; i < dataset_.train.size(); ++i) train_index_[dataset_.train[i].gt.instance_id] = i;
  for (std::size_t i = 0; i < dataset_.heldout.size(); ++i) heldout_index_[dataset_.heldout[i].gt.instance_id] = i;
  // Initial training on the sparse annotations.
  std::vector<SyntheticInstance> labeled;
  for (const auto& id : dataset_.initial_labeled) labeled.push_back(instance(id));
  state_ = sim::retrain(state_, labeled, config_);
}

const SyntheticInstance& SimulatedAdapter::instance(const std::string& id) const {
  if (const auto it = train_index_.find(id); it != train_index_.end()) return dataset_.train[it->second];
  if (const auto it = heldout_index_.find(id); it != heldout_index_.end()) return dataset_.heldout[it->second];
  throw InvalidInput("simulator: unknown instance id '" + id + "'");
}

std::vector<SyntheticInstance> SimulatedAdapter::gather(const std::set<std::string>& ids) const {
  std::vector<SyntheticInstance> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(instance(id));
  return out;
}

std::vector<InstancePrediction> SimulatedAdapter::predict_unlabeled(const LabelPool& pool) {
  return detector_predict(state_, gather(pool.unlabeled()), config_);
}

std::vector<InstancePrediction> SimulatedAdapter::predict_eval(std::span<const GroundTruthInstance> eval_set,
                                                               const LabelPool&) {
  std::vector<SyntheticInstance> inst;
  inst.reserve(eval_set.size());
  for (const auto& g : eval_set) inst.push_back(instance(g.instance_id));
  return detector_predict(state_, inst, config_);
}

std::optional<GroundTruthInstance> SimulatedAdapter::ground_truth(const std::string& instance_id) const {
  if (const auto it = train_index_.find(instance_id); it != train_index_.end()) {
    return dataset_.train[it->second].gt;
  }
  return std::nullopt;
}

std::vector<GroundTruthInstance> SimulatedAdapter::heldout_set() const {
  std::vector<GroundTruthInstance> out;
  for (const auto& s : dataset_.heldout) out.push_back(s.gt);
  return out;
}

void SimulatedAdapter::retrain(const LabelPool& pool) {
  state_ = sim::retrain(state_, gather(pool.labeled()), config_);
}

RoundState initial_round_state(const Dataset& dataset, SimulatedAdapter& adapter, const SimConfig& config) {
  const auto ids = dataset.train_ids();
  LabelPool pool(ids, dataset.initial_labeled);
  std::vector<GroundTruthInstance> labeled_gt;
  for (const auto& id : dataset.initial_labeled) labeled_gt.push_back(adapter.instance(id).gt);
  const auto preds = adapter.predict_eval(labeled_gt, pool);
  std::vector<std::pair<int, FeatureVector>> features;
  for (std::size_t i = 0; i < preds.size(); ++i) features.emplace_back(labeled_gt[i].category_id, preds[i].feature);
  auto store = init_prototypes(features, config.num_categories, config.run.alpha, config.run.gamma);
  return RoundState{std::move(pool), dataset.initial_labeled, std::move(store), std::nullopt};
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kActive: return "active";
    case Strategy::kRandom: return "random";
    case Strategy::kStatic: return "static";
  }
  return "active";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "active") return Strategy::kActive;
  if (s == "random") return Strategy::kRandom;
  if (s == "static") return Strategy::kStatic;
  throw InvalidInput("unknown strategy '" + s + "' (expected active|random|static)");
}

double gini(std::span<const std::int64_t> counts) {
  if (counts.empty()) return 0.0;
  std::vector<double> x(counts.begin(), counts.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total <= 0.0) return 0.0;
  const auto n = static_cast<double>(x.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  return weighted / (n * total);
}

SeedResult run_seed(Strategy strategy, std::uint64_t seed, const SimConfig& config) {
  SimConfig cfg = config;
  cfg.run.seed = seed;
  switch (strategy) {
    case Strategy::kActive: cfg.run.selection = SelectionMode::kGreedy; break;
    case Strategy::kStatic: cfg.run.selection = SelectionMode::kStatic; break;
    case Strategy::kRandom: cfg.run.selection = SelectionMode::kRandom; break;
  }
  const Dataset dataset = generate_dataset(cfg, seed);
  SimulatedAdapter adapter(dataset, cfg, seed);
  RoundState state = initial_round_state(dataset, adapter, cfg);
  const LoopReport loop = run_loop(state, adapter, cfg.run);

  SeedResult r;
  r.seed = seed;
  r.trajectory = loop.trajectory();
  for (const auto& round : loop.rounds) r.selected_per_round.push_back(round.selections.size());
  r.labeled_per_category.assign(static_cast<std::size_t>(cfg.num_categories), 0);
  for (const auto& id : state.pool.labeled()) {
    ++r.labeled_per_category[static_cast<std::size_t>(adapter.instance(id).gt.category_id)];
  }
  r.labeled_ids.assign(state.pool.labeled().begin(), state.pool.labeled().end());
  r.gini = gini(r.labeled_per_category);

  std::vector<GroundTruthInstance> test_gt;
  for (const auto& s : dataset.test) test_gt.push_back(s.gt);
  const auto test_preds = detector_predict(adapter.state(), dataset.test, cfg);
  r.map50 = evaluate_detections(test_preds, test_gt).map50;
  return r;
}

ExperimentReport run_experiment(Strategy strategy, std::span<const std::uint64_t> seeds, const SimConfig& config) {
  if (seeds.empty()) throw InvalidInput("run_experiment: at least one seed required");
  config.validate();
  std::vector<std::future<SeedResult>> jobs;
  for (std::uint64_t s : seeds) jobs.push_back(std::async(std::launch::async, run_seed, strategy, s, config));
  ExperimentReport report;
  report.strategy = strategy;
  for (auto& j : jobs) report.seeds.push_back(j.get());
  double sum = 0.0;
  for (const auto& r : report.seeds) sum += r.map50;
  report.mean_map50 = sum / static_cast<double>(report.seeds.size());
  double var = 0.0;
  for (const auto& r : report.seeds) var += (r.map50 - report.mean_map50) * (r.map50 - report.mean_map50);
  report.variance_map50 = var / static_cast<double>(report.seeds.size());
  return report;
}

json to_json(const ExperimentReport& report, const SimConfig& config) {
  json j;
  j["strategy"] = to_string(report.strategy);
  j["config"] = sim::to_json(config);
  j["config_hash"] = config_hash(j["config"]);
  json seeds = json::array();
  for (const auto& r : report.seeds) {
    json s;
    s["seed"] = r.seed;
    s["map50"] = round9(r.map50);
    json traj = json::array();
    for (const auto& a : r.trajectory) traj.push_back(activeobb::to_json(a));
    s["trajectory"] = traj;
    s["labeled_per_category"] = r.labeled_per_category;
    s["gini"] = round9(r.gini);
    s["selected_per_round"] = r.selected_per_round;
    s["labeled_total"] = r.labeled_ids.size();
    seeds.push_back(s);
  }
  j["seeds"] = seeds;
  j["mean_map50"] = round9(report.mean_map50);
  j["variance_map50"] = round9(report.variance_map50);
  return j;
}

std::string trajectory_csv(const ExperimentReport& report) {
  std::string out = "strategy,seed,round,a_cls,a_loc,a_inter,a_intra,a_bar\n";
  char buf[256];
  for (const auto& r : report.seeds) {
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const auto& a = r.trajectory[i];
      std::snprintf(buf, sizeof(buf), "%s,%llu,%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", to_string(report.strategy).c_str(),
                    static_cast<unsigned long long>(r.seed), i, a.a_cls, a.a_loc, a.a_inter, a.a_intra, a.bar());
      out += buf;
    }
  }
  return out;
}

}  // namespace activeobb::sim
