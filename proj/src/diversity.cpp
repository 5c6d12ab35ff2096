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

#include "activeobb/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "activeobb/error.hpp"

namespace activeobb {

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("FeatureVector: empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("FeatureVector: non-finite component");
  }
}

double FeatureVector::norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

PrototypeStore::PrototypeStore(int num_categories, double alpha, double gamma)
    : alpha_(alpha), gamma_(gamma) {
  if (num_categories < 2) throw InvalidInput("PrototypeStore: need at least 2 categories");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("PrototypeStore: alpha must lie in [0, 1)");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("PrototypeStore: gamma must be > 0");
  prototypes_.resize(static_cast<std::size_t>(num_categories));
  counts_.assign(static_cast<std::size_t>(num_categories), 0);
}

void PrototypeStore::check_category(int category) const {
  if (category < 0 || category >= num_categories()) {
    throw InvalidInput("PrototypeStore: category " + std::to_string(category) + " out of range");
  }
}

const std::optional<FeatureVector>& PrototypeStore::prototype(int category) const {
  check_category(category);
  return prototypes_[static_cast<std::size_t>(category)];
}

std::int64_t PrototypeStore::count(int category) const {
  check_category(category);
  return counts_[static_cast<std::size_t>(category)];
}

void PrototypeStore::update(int category, const FeatureVector& f) {
  check_category(category);
  auto& slot = prototypes_[static_cast<std::size_t>(category)];
  if (!slot) {
    slot = f;
  } else {
    if (slot->dim() != f.dim()) throw InvalidInput("PrototypeStore::update: dimension mismatch");
    std::vector<double> next(f.dim());
    const auto& old = slot->values();
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = alpha_ * old[i] + (1.0 - alpha_) * f.values()[i];
    }
    slot = FeatureVector(std::move(next));
  }
  ++counts_[static_cast<std::size_t>(category)];
}

void PrototypeStore::set_prototype(int category, FeatureVector f) {
  check_category(category);
  prototypes_[static_cast<std::size_t>(category)] = std::move(f);
}

void PrototypeStore::set_count(int category, std::int64_t n) {
  check_category(category);
  if (n < 0) throw InvalidInput("PrototypeStore: negative count");
  counts_[static_cast<std::size_t>(category)] = n;
}

void PrototypeStore::adjust_count(int category, std::int64_t delta) {
  check_category(category);
  auto& c = counts_[static_cast<std::size_t>(category)];
  c = std::max<std::int64_t>(0, c + delta);
}

double inter_class_diversity(std::int64_t n, double gamma) {
  if (n < 0) throw InvalidInput("inter_class_diversity: negative count");
  if (!(gamma > 0.0)) throw InvalidInput("inter_class_diversity: gamma must be > 0");
  return 1.0 / (1.0 + std::exp(gamma * static_cast<double>(n) - 1.0));
}

double intra_class_diversity(const FeatureVector& f, const FeatureVector& prototype) {
  if (f.dim() != prototype.dim()) throw InvalidInput("intra_class_diversity: dimension mismatch");
  const double nf = f.norm();
  const double np = prototype.norm();
  if (nf == 0.0 || np == 0.0) throw InvalidInput("intra_class_diversity: zero-norm vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) dot += f.values()[i] * prototype.values()[i];
  const double cosine = std::clamp(dot / (nf * np), -1.0, 1.0);
  return 1.0 - cosine;
}

double normalized_intra_diversity(const FeatureVector& f, const std::optional<FeatureVector>& prototype) {
  if (!prototype) return kMissingPrototypeDiversity;
  return intra_class_diversity(f, *prototype) / 2.0;
}

PrototypeStore init_prototypes(std::span<const std::pair<int, FeatureVector>> labeled, int num_categories,
                               double alpha, double gamma) {
  if (labeled.empty()) throw InvalidInput("init_prototypes: empty labeled set");
  PrototypeStore store(num_categories, alpha, gamma);
  const std::size_t dim = labeled.front().second.dim();
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(num_categories));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_categories), 0);
  for (const auto& [category, f] : labeled) {
    if (category < 0 || category >= num_categories) {
      throw InvalidInput("init_prototypes: category " + std::to_string(category) + " out of range");
    }
    if (f.dim() != dim) throw InvalidInput("init_prototypes: inconsistent feature dimension");
    auto& sum = sums[static_cast<std::size_t>(category)];
    if (sum.empty()) sum.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) sum[i] += f.values()[i];
    ++counts[static_cast<std::size_t>(category)];
  }
  for (int c = 0; c < num_categories; ++c) {
    const auto n = counts[static_cast<std::size_t>(c)];
    store.set_count(c, n);
    if (n == 0) continue;
    auto mean = sums[static_cast<std::size_t>(c)];
    for (double& v : mean) v /= static_cast<double>(n);
    store.set_prototype(c, FeatureVector(std::move(mean)));
  }
  return store;
}

void update_prototype(PrototypeStore& store, int category, const FeatureVector& f) {
  store.update(category, f);
}

}  // namespace activeobb
