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

#include "activeobb/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "activeobb/error.hpp"

namespace activeobb {

using nlohmann::json;

double round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

json rounded(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(round9(v));
  return arr;
}

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.is_array()) throw InvalidInput(std::string("'") + field + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidInput(std::string("'") + field + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw InvalidInput("record must be a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw InvalidInput(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

int category_key(const std::string& key) {
  try {
    std::size_t pos = 0;
    const int c = std::stoi(key, &pos);
    if (pos != key.size() || c < 0) throw InvalidInput("bad category key '" + key + "'");
    return c;
  } catch (const std::logic_error&) {
    throw InvalidInput("bad category key '" + key + "'");
  }
}

}  // namespace

json to_json(const RotatedBox& box) {
  return json::array({round9(box.cx()), round9(box.cy()), round9(box.w()), round9(box.h()), round9(box.theta())});
}

RotatedBox box_from_json(const json& j) {
  const auto v = number_array(j, "box");
  if (v.size() != 5) throw InvalidInput("box must have 5 elements [cx, cy, w, h, theta]");
  return RotatedBox(v[0], v[1], v[2], v[3], v[4]);
}

json to_json(const GroundTruthInstance& gt) {
  json j;
  j["image_id"] = gt.image_id;
  j["instance_id"] = gt.instance_id;
  j["category_id"] = gt.category_id;
  j["box"] = to_json(gt.box);
  return j;
}

GroundTruthInstance gt_from_json(const json& j) {
  const auto& cat = field(j, "category_id");
  if (!cat.is_number_integer() || cat.get<long long>() < 0) {
    throw InvalidInput("field 'category_id' must be a non-negative integer");
  }
  return GroundTruthInstance{string_field(j, "image_id"), string_field(j, "instance_id"), cat.get<int>(),
                             box_from_json(field(j, "box"))};
}

json to_json(const InstancePrediction& pred) {
  json j;
  j["image_id"] = pred.image_id;
  j["instance_id"] = pred.instance_id;
  j["box"] = to_json(pred.box);
  j["probs"] = rounded(pred.probs.probs());
  j["feature"] = rounded(pred.feature.values());
  j["pred_loc_unc"] = round9(pred.pred_loc_unc);
  return j;
}

InstancePrediction prediction_from_json(const json& j) {
  const std::string image_id = string_field(j, "image_id");
  std::string instance_id;
  if (j.contains("instance_id") && !j.at("instance_id").is_null()) instance_id = string_field(j, "instance_id");
  auto box = box_from_json(field(j, "box"));
  const auto probs = j.contains("probs") ? CategoryDistribution(number_array(j.at("probs"), "probs"))
                                         : CategoryDistribution::from_scores(number_array(field(j, "scores"), "scores"));
  FeatureVector feature(number_array(field(j, "feature"), "feature"));
  const auto& unc = field(j, "pred_loc_unc");
  if (!unc.is_number()) throw InvalidInput("field 'pred_loc_unc' must be a number");
  InstancePrediction pred{image_id, instance_id, box, probs, std::move(feature), unc.get<double>()};
  validate(pred);
  return pred;
}

json to_json(const AbilityVector& a) {
  json j;
  j["a_cls"] = round9(a.a_cls);
  j["a_loc"] = round9(a.a_loc);
  j["a_inter"] = round9(a.a_inter);
  j["a_intra"] = round9(a.a_intra);
  j["a_bar"] = round9(a.bar());
  return j;
}

AbilityVector ability_from_json(const json& j) {
  AbilityVector a;
  auto get = [&](const char* name) {
    const auto& v = field(j, name);
    if (!v.is_number()) throw InvalidInput(std::string("field '") + name + "' must be a number");
    const double x = v.get<double>();
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput(std::string("field '") + name + "' outside [0, 1]");
    return x;
  };
  a.a_cls = get("a_cls");
  a.a_loc = get("a_loc");
  a.a_inter = get("a_inter");
  a.a_intra = get("a_intra");
  return a;
}

json ability_report_json(const AbilityReport& report) {
  json j = to_json(report.ability);
  const auto w = mso_weights(report.ability);
  j["weights"] = rounded(w);
  j["rare_categories"] = report.rare;
  return j;
}

json to_json(const SelectionRecord& record) {
  const auto& b = record.breakdown;
  json j;
  j["rank"] = record.rank;
  j["instance_id"] = record.instance_id;
  j["pseudo_category"] = b.pseudo_category;
  j["u_cls_norm"] = round9(b.u_cls_norm);
  j["u_loc_theta"] = round9(b.u_loc_theta);
  j["d_inter"] = round9(b.d_inter);
  j["d_intra_norm"] = round9(b.d_intra_norm);
  j["weights"] = rounded(b.weights);
  j["s"] = round9(b.s);
  j["s_final"] = round9(b.s_final);
  return j;
}

json to_json(const PrototypeStore& store) {
  json j = json::object();
  for (int c = 0; c < store.num_categories(); ++c) {
    json entry;
    const auto& p = store.prototype(c);
    entry["prototype"] = p ? rounded(p->values()) : json(nullptr);
    entry["count"] = store.count(c);
    j[std::to_string(c)] = entry;
  }
  return j;
}

json to_json(const DetectionMetrics& metrics) {
  json j;
  json ap = json::object();
  for (const auto& [c, v] : metrics.ap) ap[std::to_string(c)] = round9(v);
  j["ap"] = ap;
  j["map50"] = round9(metrics.map50);
  j["mean_iou"] = round9(metrics.mean_iou);
  return j;
}

json state_to_json(const RoundState& state, const json& config) {
  json j;
  j["round"] = state.pool.round();
  j["labeled"] = state.pool.labeled();
  j["unlabeled"] = state.pool.unlabeled();
  j["initial_labeled"] = state.initial_labeled;
  json counts = json::object();
  json prototypes = json::object();
  for (int c = 0; c < state.store.num_categories(); ++c) {
    counts[std::to_string(c)] = state.store.count(c);
    if (const auto& p = state.store.prototype(c)) prototypes[std::to_string(c)] = rounded(p->values());
  }
  j["category_counts"] = counts;
  j["prototypes"] = prototypes;
  j["ability"] = state.ability ? to_json(*state.ability) : json(nullptr);
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  return j;
}

RoundState state_from_json(const json& j, double alpha, double gamma) {
  try {
    const auto& counts = field(j, "category_counts");
    if (!counts.is_object()) throw InvalidInput("'category_counts' must be an object");
    std::map<int, std::int64_t> by_category;
    for (const auto& [key, value] : counts.items()) {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw InvalidInput("category count for '" + key + "' must be a non-negative integer");
      }
      by_category[category_key(key)] = value.get<std::int64_t>();
    }
    const int num_categories = by_category.empty() ? 0 : by_category.rbegin()->first + 1;
    if (static_cast<std::size_t>(num_categories) != by_category.size()) {
      throw InvalidInput("'category_counts' must list categories 0..C-1");
    }
    PrototypeStore store(num_categories, alpha, gamma);
    for (const auto& [c, n] : by_category) store.set_count(c, n);
    if (j.contains("prototypes")) {
      for (const auto& [key, value] : j.at("prototypes").items()) {
        if (value.is_null()) continue;
        store.set_prototype(category_key(key), FeatureVector(number_array(value, "prototypes")));
      }
    }

    const auto labeled = field(j, "labeled").get<std::vector<std::string>>();
    std::vector<std::string> unlabeled;
    if (j.contains("unlabeled")) unlabeled = j.at("unlabeled").get<std::vector<std::string>>();
    std::vector<std::string> all = labeled;
    all.insert(all.end(), unlabeled.begin(), unlabeled.end());
    LabelPool pool(all, labeled);
    const auto& round = field(j, "round");
    if (!round.is_number_integer() || round.get<int>() < 0) throw InvalidInput("'round' must be >= 0");
    pool.set_round(round.get<int>());

    std::vector<std::string> initial = labeled;
    if (j.contains("initial_labeled")) initial = j.at("initial_labeled").get<std::vector<std::string>>();

    std::optional<AbilityVector> ability;
    if (j.contains("ability") && !j.at("ability").is_null()) ability = ability_from_json(j.at("ability"));
    return RoundState{std::move(pool), std::move(initial), std::move(store), ability};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("state: ") + e.what());
  }
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t line)>& fn) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(text), line);
    } catch (const ParseError&) {
      throw;
    } catch (const json::exception& e) {
      throw ParseError(path.string(), line, e.what());
    } catch (const InvalidInput& e) {
      throw ParseError(path.string(), line, e.what());
    }
  }
}

std::vector<GroundTruthInstance> read_ground_truth(const std::filesystem::path& path) {
  std::vector<GroundTruthInstance> out;
  std::set<std::string> ids;
  for_each_jsonl(path, [&](const json& j, std::size_t) {
    auto gt = gt_from_json(j);
    if (!ids.insert(gt.instance_id).second) throw InvalidInput("duplicate instance_id '" + gt.instance_id + "'");
    out.push_back(std::move(gt));
  });
  return out;
}

std::vector<InstancePrediction> read_predictions(const std::filesystem::path& path) {
  std::vector<InstancePrediction> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(prediction_from_json(j)); });
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_jsonl_file(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::string text;
  for (const auto& l : lines) text += l.dump() + "\n";
  write_text_file(path, text);
}

}  // namespace activeobb
