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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "activeobb/observation.hpp"
#include "activeobb/selector.hpp"

namespace activeobb {

// Rounds to 9 significant digits. Serializing the result prints at most
// 9 digits and re-reading it reproduces the same double.
double round9(double x);

nlohmann::json to_json(const RotatedBox& box);
RotatedBox box_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GroundTruthInstance& gt);
GroundTruthInstance gt_from_json(const nlohmann::json& j);

// Accepts "probs" (a distribution) or "scores" (non-negative, normalized here).
nlohmann::json to_json(const InstancePrediction& pred);
InstancePrediction prediction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AbilityVector& a);
AbilityVector ability_from_json(const nlohmann::json& j);

// ability.json body: abilities, a_bar, MSO weights and rare categories.
nlohmann::json ability_report_json(const AbilityReport& report);

// One selection.jsonl record.
nlohmann::json to_json(const SelectionRecord& record);

// {category_id: {"prototype": [...], "count": n}}
nlohmann::json to_json(const PrototypeStore& store);

nlohmann::json to_json(const DetectionMetrics& metrics);

// state.json: round, labeled ids, counts, prototypes, ability, config hash.
nlohmann::json state_to_json(const RoundState& state, const nlohmann::json& config);
RoundState state_from_json(const nlohmann::json& j, double alpha, double gamma);

// Streams a JSONL file line by line; blank lines are skipped. Errors raised
// by `fn` or by the JSON parser are reported as ParseError with the line number.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t line)>& fn);

std::vector<GroundTruthInstance> read_ground_truth(const std::filesystem::path& path);
std::vector<InstancePrediction> read_predictions(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Pretty JSON with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_jsonl_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& lines);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace activeobb
