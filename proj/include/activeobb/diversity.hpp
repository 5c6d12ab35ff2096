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
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace activeobb {

inline constexpr double kDefaultGamma = 0.01;
inline constexpr double kDefaultAlpha = 0.9;
// Normalized intra-category diversity reported when a category has no prototype.
inline constexpr double kMissingPrototypeDiversity = 0.5;

// Finite, non-empty embedding.
class FeatureVector {
 public:
  explicit FeatureVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  double norm() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<double> values_;
};

// Per-category EMA prototypes and labeled counts.
class PrototypeStore {
 public:
  PrototypeStore(int num_categories, double alpha = kDefaultAlpha, double gamma = kDefaultGamma);

  int num_categories() const { return static_cast<int>(counts_.size()); }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

  const std::optional<FeatureVector>& prototype(int category) const;
  std::int64_t count(int category) const;
  const std::vector<std::int64_t>& counts() const { return counts_; }

  // EMA step P <- alpha*P + (1-alpha)*f (P := f when absent); N_c += 1.
  void update(int category, const FeatureVector& f);

  // Direct access for state restoration and annotation corrections.
  void set_prototype(int category, FeatureVector f);
  void set_count(int category, std::int64_t n);
  void adjust_count(int category, std::int64_t delta);

 private:
  void check_category(int category) const;

  double alpha_;
  double gamma_;
  std::vector<std::optional<FeatureVector>> prototypes_;
  std::vector<std::int64_t> counts_;
};

// 1 / (1 + exp(gamma*n - 1)).
double inter_class_diversity(std::int64_t n, double gamma = kDefaultGamma);

// Cosine distance 1 - cos(f, P), in [0, 2].
double intra_class_diversity(const FeatureVector& f, const FeatureVector& prototype);

// Cosine distance halved to [0, 1]; 0.5 when the prototype is absent.
double normalized_intra_diversity(const FeatureVector& f, const std::optional<FeatureVector>& prototype);

// Prototypes are arithmetic means of labeled features per category.
PrototypeStore init_prototypes(std::span<const std::pair<int, FeatureVector>> labeled, int num_categories,
                               double alpha = kDefaultAlpha, double gamma = kDefaultGamma);

void update_prototype(PrototypeStore& store, int category, const FeatureVector& f);

}  // namespace activeobb
