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

#include "activeobb/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "activeobb/error.hpp"
#include "activeobb/io.hpp"
#include "activeobb/random.hpp"

namespace activeobb {

std::string to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kGreedy: return "greedy";
    case SelectionMode::kStatic: return "static";
    case SelectionMode::kRandom: return "random";
  }
  return "greedy";
}

std::string to_string(MsoEvalSet set) {
  switch (set) {
    case MsoEvalSet::kInitial: return "initial";
    case MsoEvalSet::kCurrent: return "current";
    case MsoEvalSet::kHeldout: return "heldout";
  }
  return "initial";
}

std::string to_string(InterAggregate aggregate) {
  return aggregate == InterAggregate::kSum ? "sum" : "mean";
}

SelectionMode parse_selection_mode(const std::string& s) {
  if (s == "greedy") return SelectionMode::kGreedy;
  if (s == "static") return SelectionMode::kStatic;
  if (s == "random") return SelectionMode::kRandom;
  throw InvalidInput("unknown selection mode '" + s + "' (expected greedy|static|random)");
}

MsoEvalSet parse_mso_eval(const std::string& s) {
  if (s == "initial") return MsoEvalSet::kInitial;
  if (s == "current") return MsoEvalSet::kCurrent;
  if (s == "heldout") return MsoEvalSet::kHeldout;
  throw InvalidInput("unknown mso_eval '" + s + "' (expected initial|current|heldout)");
}

InterAggregate parse_inter_aggregate(const std::string& s) {
  if (s == "mean") return InterAggregate::kMean;
  if (s == "sum") return InterAggregate::kSum;
  throw InvalidInput("unknown inter_aggregate '" + s + "' (expected mean|sum)");
}

void RunConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("config: gamma must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidInput("config: beta must be >= 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("config: alpha must lie in [0, 1)");
  if (rounds < 0) throw InvalidInput("config: rounds must be >= 0");
  if (budget < 0) throw InvalidInput("config: budget must be >= 0");
  if (!(rare_quantile >= 0.0 && rare_quantile <= 1.0)) {
    throw InvalidInput("config: rare_quantile must lie in [0, 1]");
  }
}

namespace {
constexpr std::array<const char*, 10> kRunKeys = {"gamma",   "beta",          "alpha",    "rounds",
                                                  "budget",  "rare_quantile", "selection", "mso_eval",
                                                  "inter_aggregate", "seed"};
}  // namespace

bool is_run_config_key(const std::string& key) {
  for (const char* k : kRunKeys) {
    if (key == k) return true;
  }
  return false;
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j;
  j["gamma"] = round9(config.gamma);
  j["beta"] = round9(config.beta);
  j["alpha"] = round9(config.alpha);
  j["rounds"] = config.rounds;
  j["budget"] = config.budget;
  j["rare_quantile"] = round9(config.rare_quantile);
  j["selection"] = to_string(config.selection);
  j["mso_eval"] = to_string(config.mso_eval);
  j["inter_aggregate"] = to_string(config.inter_aggregate);
  j["seed"] = config.seed;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  try {
    if (j.contains("gamma")) base.gamma = j.at("gamma").get<double>();
    if (j.contains("beta")) base.beta = j.at("beta").get<double>();
    if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
    if (j.contains("rounds")) base.rounds = j.at("rounds").get<int>();
    if (j.contains("budget")) base.budget = j.at("budget").get<std::int64_t>();
    if (j.contains("rare_quantile")) base.rare_quantile = j.at("rare_quantile").get<double>();
    if (j.contains("selection")) base.selection = parse_selection_mode(j.at("selection").get<std::string>());
    if (j.contains("mso_eval")) base.mso_eval = parse_mso_eval(j.at("mso_eval").get<std::string>());
    if (j.contains("inter_aggregate")) {
      base.inter_aggregate = parse_inter_aggregate(j.at("inter_aggregate").get<std::string>());
    }
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  base.validate();
  return base;
}

std::string config_hash(const nlohmann::json& j) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace activeobb
