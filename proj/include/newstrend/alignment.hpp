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
#ifndef NEWSTREND_ALIGNMENT_HPP_
#define NEWSTREND_ALIGNMENT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "newstrend/embeddings.hpp"
#include "newstrend/types.hpp"

namespace newstrend {

struct ProcrustesFit {
  Matrix rotation;
  // A^T B was all zeros; rotation is the identity.
  bool degenerate = false;
};

// Orthogonal Q minimizing ||A Q - B||_F: with A^T B = U S V^T, Q = U V^T.
// Each left singular vector is sign-fixed so its largest-magnitude entry is
// positive, making the result deterministic.
ProcrustesFit procrustes(const Matrix &a, const Matrix &b);

struct SharedVocabulary {
  std::string from;
  std::string to;
  std::vector<std::string> words;
};

struct AlignmentMap {
  std::string anchor;
  // Row-vector convention: aligned = original * transforms[label].
  std::map<std::string, Matrix> transforms;
  std::vector<SharedVocabulary> shared_vocab;
};

struct AlignedSeries {
  std::vector<EmbeddingSlice> slices;  // chronological

  const EmbeddingSlice *find(std::string_view label) const;
  std::vector<std::string> labels() const;
};

struct AlignmentResult {
  AlignedSeries series;
  AlignmentMap map;
};

// Words present in both slices, ranked by their combined row positions
// (rows are frequency-ordered), keeping at most top_n; 0 keeps all.
std::vector<std::string> shared_vocabulary(const EmbeddingSlice &a,
                                           const EmbeddingSlice &b,
                                           std::size_t top_n);

// Fits each adjacent pair toward the anchor and composes the chain so every
// slice lands in the anchor's frame. Anchor defaults to the latest slice.
// Throws InsufficientOverlap, UnknownSlice, InvalidArgument.
AlignmentResult align_series(std::vector<EmbeddingSlice> slices,
                             std::optional<std::string> anchor = std::nullopt,
                             std::size_t shared_top = 5000,
                             Exec exec = Exec::kSerial);

double max_orthogonality_error(const Matrix &q);

void write_matrix(const Matrix &m, std::ostream &out);

}  // namespace newstrend

#endif  // NEWSTREND_ALIGNMENT_HPP_
