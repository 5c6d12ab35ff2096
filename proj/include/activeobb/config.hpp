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
#include <string>

#include <json.hpp>

#include "activeobb/observation.hpp"

namespace activeobb {

enum class SelectionMode { kGreedy, kStatic, kRandom };
enum class MsoEvalSet { kInitial, kCurrent, kHeldout };

std::string to_string(SelectionMode mode);
std::string to_string(MsoEvalSet set);
std::string to_string(InterAggregate aggregate);
SelectionMode parse_selection_mode(const std::string& s);
MsoEvalSet parse_mso_eval(const std::string& s);
InterAggregate parse_inter_aggregate(const std::string& s);

struct RunConfig {
  double gamma = kDefaultGamma;
  double beta = kDefaultBeta;
  double alpha = kDefaultAlpha;
  int rounds = 2;
  std::int64_t budget = 0;
  double rare_quantile = 1.0 / 3.0;
  SelectionMode selection = SelectionMode::kGreedy;
  MsoEvalSet mso_eval = MsoEvalSet::kInitial;
  InterAggregate inter_aggregate = InterAggregate::kMean;
  std::uint64_t seed = 0;

  // Throws InvalidInput on out-of-range values.
  void validate() const;

  ObservationConfig observation() const { return {rare_quantile, inter_aggregate}; }
};

// Flat JSON object with the RunConfig field names.
nlohmann::json to_json(const RunConfig& config);

// Reads the RunConfig keys present in `j` over `base`; other keys are ignored.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

bool is_run_config_key(const std::string& key);

// Hex FNV-1a digest of the canonical JSON form.
std::string config_hash(const nlohmann::json& j);

}  // namespace activeobb
