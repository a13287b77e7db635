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
#ifndef NEWSTREND_KERNELS_HPP_
#define NEWSTREND_KERNELS_HPP_

#include <span>

#include "newstrend/types.hpp"

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path that performs the same per-element arithmetic, so both produce
// identical results; tests hold them to that.
namespace newstrend::kernels {

// out[i] = cosine(rows.row(i), query); 0 for zero rows.
void cosine_scan(const Matrix &rows, const Vector &query, std::span<double> out,
                 Exec exec);

// Pairwise squared Euclidean distances between rows.
Matrix squared_distances(const Matrix &x, Exec exec);

// t-SNE gradient of KL(P || Q) for embedding y (N x 2) with P scaled by
// exaggeration. Returns KL(P || Q) for the unscaled P.
double tsne_gradient(const Matrix &p, const Matrix &y, double exaggeration,
                     Matrix &grad, Exec exec);

}  // namespace newstrend::kernels

#endif  // NEWSTREND_KERNELS_HPP_
