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
#ifndef NEWSTREND_TRENDS_HPP_
#define NEWSTREND_TRENDS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newstrend/alignment.hpp"

namespace newstrend {

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

struct SliceNeighbors {
  std::string slice;
  std::vector<Neighbor> neighbors;  // empty when the key is absent
};

struct NeighborTable {
  std::string key;
  std::size_t n = 0;
  std::vector<SliceNeighbors> slices;
};

// Exact top-n by cosine within one slice, excluding the key; ties go to the
// lexicographically smaller word. Throws OutOfVocabulary.
std::vector<Neighbor> nearest(const EmbeddingSlice &slice, std::string_view key,
                              std::size_t n, Exec exec = Exec::kParallel);

// Throws UnknownWord when the key is absent from every slice.
NeighborTable neighbors(const AlignedSeries &series, std::string_view key,
                        std::size_t n, Exec exec = Exec::kParallel);

// cos(key, other, t) per slice; nullopt where either word is missing.
std::vector<std::optional<double>> similarity_series(
    const AlignedSeries &series, std::string_view key, std::string_view other);

// Sum of absolute first differences. Throws TooFewSlices.
double drift(std::span<const double> values);

struct DriftCandidate {
  std::string word;
  double drift = 0.0;
};

struct DriftReport {
  std::string key;
  std::vector<std::string> slices;
  std::vector<DriftCandidate> candidates;  // ranked
  std::map<std::string, std::vector<double>> series;
};

// Pool = union of per-slice top-pool_n neighbors that exist in every
// slice; ranked by drift descending, ties lexicographic; top k returned.
// Throws UnknownWord unless the key is in every slice, TooFewSlices,
// InvalidArgument for zero pool_n or k.
DriftReport top_drift_words(const AlignedSeries &series, std::string_view key,
                            std::size_t pool_n, std::size_t k,
                            Exec exec = Exec::kParallel);

}  // namespace newstrend

#endif  // NEWSTREND_TRENDS_HPP_
