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

#include "activeobb/selector.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "activeobb/error.hpp"
#include "activeobb/random.hpp"

namespace activeobb {

LabelPool::LabelPool(std::span<const std::string> all_ids, std::span<const std::string> labeled) {
  unlabeled_.insert(all_ids.begin(), all_ids.end());
  if (unlabeled_.size() != all_ids.size()) throw InvalidInput("LabelPool: duplicate instance ids");
  for (const auto& id : labeled) {
    if (unlabeled_.erase(id) == 0 && !labeled_.count(id)) {
      throw InvalidInput("LabelPool: labeled id '" + id + "' is not in the dataset");
    }
    labeled_.insert(id);
  }
}

void LabelPool::label(std::span<const std::string> ids) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!unlabeled_.count(id)) throw InvalidInput("LabelPool: id '" + id + "' is not unlabeled");
    if (!seen.insert(id).second) throw InvalidInput("LabelPool: id '" + id + "' selected twice");
  }
  for (const auto& id : ids) {
    unlabeled_.erase(id);
    labeled_.insert(id);
  }
}

namespace {

// Recomputes the store-dependent terms and the combined scores of `b`.
void refresh_diversity(ScoreBreakdown& b, const InstancePrediction& pred, const PrototypeStore& store,
                       const AbilityVector& ability) {
  b.d_inter = inter_class_diversity(store.count(b.pseudo_category), store.gamma());
  b.d_intra_norm = normalized_intra_diversity(pred.feature, store.prototype(b.pseudo_category));
  b.weights = mso_weights(ability);
  b.s = composite_score(b.scores(), ability);
  b.s_final = final_score(b.s, ability.bar());
}

}  // namespace

ScoreBreakdown score_candidate(const InstancePrediction& pred, const PrototypeStore& store,
                               const AbilityVector& ability) {
  validate(pred);
  if (static_cast<int>(pred.probs.size()) != store.num_categories()) {
    throw InvalidInput("score_candidate: prediction " + pred.instance_id + " has " +
                       std::to_string(pred.probs.size()) + " categories, expected " +
                       std::to_string(store.num_categories()));
  }
  ScoreBreakdown b;
  b.pseudo_category = pred.category();
  b.u_cls_norm = normalized_classification_uncertainty(pred.probs);
  b.u_loc_theta = pred.pred_loc_unc;
  refresh_diversity(b, pred, store, ability);
  return b;
}

namespace {

struct Ranking {
  std::span<const InstancePrediction> candidates;
  const std::vector<ScoreBreakdown>* scores;

  bool operator()(std::size_t a, std::size_t b) const {
    const auto& sa = (*scores)[a];
    const auto& sb = (*scores)[b];
    if (sa.s_final != sb.s_final) return sa.s_final > sb.s_final;
    if (sa.s != sb.s) return sa.s > sb.s;
    return candidates[a].instance_id < candidates[b].instance_id;
  }
};

SelectionRecord make_record(const InstancePrediction& pred, int rank, const ScoreBreakdown& b) {
  return SelectionRecord{pred.instance_id, rank, b};
}

std::vector<SelectionRecord> select_greedy(std::span<const InstancePrediction> candidates,
                                           PrototypeStore& store, const AbilityVector& ability,
                                           std::size_t budget) {
  std::vector<ScoreBreakdown> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = score_candidate(candidates[i], store, ability);
  const Ranking better{candidates, &scores};

  // Best-first queue per pseudo-category; a pick only moves its own category's scores.
  std::vector<std::set<std::size_t, Ranking>> queues(static_cast<std::size_t>(store.num_categories()),
                                                     std::set<std::size_t, Ranking>(better));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    queues[static_cast<std::size_t>(scores[i].pseudo_category)].insert(i);
  }

  std::vector<SelectionRecord> picks;
  picks.reserve(budget);
  while (picks.size() < budget) {
    std::optional<std::size_t> best;
    for (const auto& q : queues) {
      if (q.empty()) continue;
      if (!best || better(*q.begin(), *best)) best = *q.begin();
    }
    const std::size_t pick = *best;
    const int category = scores[pick].pseudo_category;
    auto& queue = queues[static_cast<std::size_t>(category)];
    queue.erase(pick);
    picks.push_back(make_record(candidates[pick], static_cast<int>(picks.size()) + 1, scores[pick]));

    store.update(category, candidates[pick].feature);

    std::vector<std::size_t> remaining(queue.begin(), queue.end());
    queue.clear();
    for (std::size_t i : remaining) refresh_diversity(scores[i], candidates[i], store, ability);
    queue.insert(remaining.begin(), remaining.end());
  }
  return picks;
}

std::vector<SelectionRecord> select_static(std::span<const InstancePrediction> candidates,
                                           PrototypeStore& store, const AbilityVector& ability,
                                           std::size_t budget) {
  std::vector<ScoreBreakdown> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = score_candidate(candidates[i], store, ability);
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(budget), order.end(),
                    Ranking{candidates, &scores});
  std::vector<SelectionRecord> picks;
  picks.reserve(budget);
  for (std::size_t r = 0; r < budget; ++r) {
    picks.push_back(make_record(candidates[order[r]], static_cast<int>(r) + 1, scores[order[r]]));
  }
  for (std::size_t r = 0; r < budget; ++r) {
    store.update(scores[order[r]].pseudo_category, candidates[order[r]].feature);
  }
  return picks;
}

std::vector<SelectionRecord> select_random(std::span<const InstancePrediction> candidates,
                                           PrototypeStore& store, const AbilityVector& ability,
                                           std::size_t budget, std::uint64_t seed) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].instance_id < candidates[b].instance_id;
  });
  CounterRng rng(seed);
  std::vector<SelectionRecord> picks;
  picks.reserve(budget);
  for (std::size_t r = 0; r < budget; ++r) {
    const std::size_t j = r + static_cast<std::size_t>(rng() % (order.size() - r));
    std::swap(order[r], order[j]);
    const auto& pred = candidates[order[r]];
    const auto b = score_candidate(pred, store, ability);
    picks.push_back(make_record(pred, static_cast<int>(r) + 1, b));
    store.update(b.pseudo_category, pred.feature);
  }
  return picks;
}

}  // namespace

std::vector<SelectionRecord> greedy_select(std::span<const InstancePrediction> candidates,
                                           PrototypeStore& store, const AbilityVector& ability,
                                           std::size_t budget, SelectionMode mode,
                                           std::uint64_t random_seed) {
  if (candidates.empty()) throw InvalidInput("greedy_select: empty candidate set");
  if (budget > candidates.size()) {
    throw InvalidInput("greedy_select: budget " + std::to_string(budget) + " exceeds " +
                       std::to_string(candidates.size()) + " candidates");
  }
  std::unordered_set<std::string> ids;
  for (const auto& c : candidates) {
    if (!ids.insert(c.instance_id).second) {
      throw InvalidInput("greedy_select: duplicate candidate id '" + c.instance_id + "'");
    }
  }
  switch (mode) {
    case SelectionMode::kGreedy: return select_greedy(candidates, store, ability, budget);
    case SelectionMode::kStatic: return select_static(candidates, store, ability, budget);
    case SelectionMode::kRandom: return select_random(candidates, store, ability, budget, random_seed);
  }
  return {};
}

AnnotationResult annotate(LabelPool& pool, std::span<const SelectionRecord> picks,
                          const AnnotationOracle& oracle, PrototypeStore& store) {
  AnnotationResult result;
  result.labeled_ids.reserve(picks.size());
  for (const auto& p : picks) result.labeled_ids.push_back(p.instance_id);
  pool.label(result.labeled_ids);
  for (const auto& p : picks) {
    const auto truth = oracle ? oracle(p.instance_id) : std::nullopt;
    if (!truth || truth->category_id == p.breakdown.pseudo_category) continue;
    store.adjust_count(p.breakdown.pseudo_category, -1);
    store.adjust_count(truth->category_id, +1);
    ++result.corrections;
  }
  return result;
}

AbilityReport observe(const RoundState& state, ModelAdapter& adapter, const RunConfig& config) {
  std::vector<GroundTruthInstance> eval_set;
  auto collect = [&](const auto& ids) {
    for (const auto& id : ids) {
      auto gt = adapter.ground_truth(id);
      if (!gt) throw ContractViolation("adapter has no ground truth for labeled id '" + id + "'");
      eval_set.push_back(std::move(*gt));
    }
  };
  switch (config.mso_eval) {
    case MsoEvalSet::kInitial: collect(state.initial_labeled); break;
    case MsoEvalSet::kCurrent: collect(state.pool.labeled()); break;
    case MsoEvalSet::kHeldout: eval_set = adapter.heldout_set(); break;
  }
  if (eval_set.empty()) {
    throw ContractViolation("model state evaluation set '" + to_string(config.mso_eval) + "' is empty");
  }
  const auto preds = adapter.predict_eval(eval_set, state.pool);
  return ability_vector(preds, eval_set, state.store.counts(), config.observation());
}

namespace {

void check_unlabeled_predictions(const LabelPool& pool, std::span<const InstancePrediction> preds) {
  std::unordered_set<std::string> seen;
  for (const auto& p : preds) {
    if (!pool.unlabeled().count(p.instance_id)) {
      throw ContractViolation("adapter returned a prediction for non-candidate id '" + p.instance_id + "'");
    }
    if (!seen.insert(p.instance_id).second) {
      throw ContractViolation("adapter returned two predictions for id '" + p.instance_id + "'");
    }
    try {
      validate(p);
    } catch (const InvalidInput& e) {
      throw ContractViolation(e.what());
    }
  }
  if (seen.size() != pool.unlabeled().size()) {
    throw ContractViolation("adapter predicted " + std::to_string(seen.size()) + " of " +
                            std::to_string(pool.unlabeled().size()) + " unlabeled instances");
  }
}

}  // namespace

RoundReport run_round(RoundState& state, ModelAdapter& adapter, const RunConfig& config) {
  config.validate();
  RoundReport report;
  report.round = state.pool.round();
  report.observed = observe(state, adapter, config);
  state.ability = report.observed.ability;
  report.weights = mso_weights(report.observed.ability);

  const auto budget = std::min<std::size_t>(static_cast<std::size_t>(config.budget), state.pool.unlabeled().size());
  if (budget > 0) {
    const auto preds = adapter.predict_unlabeled(state.pool);
    check_unlabeled_predictions(state.pool, preds);
    report.selections = greedy_select(preds, state.store, report.observed.ability, budget, config.selection,
                                      stream_seed(config.seed, "random-strategy",
                                                  static_cast<std::uint64_t>(report.round)));
    const AnnotationOracle oracle = [&adapter](const std::string& id) {
      auto gt = adapter.ground_truth(id);
      if (!gt) throw ContractViolation("adapter cannot annotate selected id '" + id + "'");
      return gt;
    };
    report.corrections = annotate(state.pool, report.selections, oracle, state.store).corrections;
  }
  adapter.retrain(state.pool);
  state.pool.advance_round();
  report.labeled_after = state.pool.labeled().size();
  return report;
}

std::vector<AbilityVector> LoopReport::trajectory() const {
  std::vector<AbilityVector> t;
  for (const auto& r : rounds) t.push_back(r.observed.ability);
  t.push_back(final_observation.ability);
  return t;
}

LoopReport run_loop(RoundState& state, ModelAdapter& adapter, const RunConfig& config) {
  LoopReport report;
  for (int n = 0; n < config.rounds; ++n) report.rounds.push_back(run_round(state, adapter, config));
  report.final_observation = observe(state, adapter, config);
  return report;
}

}  // namespace activeobb
