// Copyright 2026 The Newstrend Authors.
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
#ifndef NEWSTREND_PROJECTION_HPP_
#define NEWSTREND_PROJECTION_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "newstrend/alignment.hpp"
#include "newstrend/types.hpp"

namespace newstrend {

struct LabeledPoint {
  std::string label;  // word_Mon(YY), e.g. "max_Mar19"
  std::string word;
  std::string slice;
  Vector vector;
};

struct LabeledPointSet {
  std::vector<LabeledPoint> points;
};

// "2019-03" -> "Mar19"
std::string short_slice_label(std::string_view label);

// For each slice holding the key: the key's vector plus its top-n neighbors.
// Throws UnknownWord if no slice holds the key.
LabeledPointSet pool_neighbors(const AlignedSeries &series,
                               std::string_view key, std::size_t n);

struct TsneParams {
  double perplexity = 15.0;
  int iterations = 1000;
  std::uint64_t seed = 42;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double learning_rate = 200.0;
  double init_sigma = 1e-4;
  Exec exec = Exec::kSerial;
};

struct Projection2D {
  std::vector<std::string> labels;
  std::vector<std::array<double, 2>> coords;
  TsneParams params;
  std::vector<double> kl_history;  // KL(P || Q) per iteration
};

// Exact O(N^2) t-SNE. Throws TooFewPoints, PerplexityTooHigh.
Projection2D tsne(const LabeledPointSet &points, const TsneParams &params);

// Row-normalized conditional affinities whose entropy matches
// log(perplexity), found by bisection on the Gaussian precision.
Matrix conditional_affinities(const Matrix &squared_distances,
                              double perplexity);

}  // namespace newstrend

#endif  // NEWSTREND_PROJECTION_HPP_
