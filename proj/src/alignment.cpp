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
#include "newstrend/alignment.hpp"

#include <algorithm>
#include <exception>
#include <iostream>
#include <set>

#include <Eigen/SVD>

#include "newstrend/errors.hpp"

namespace newstrend {

ProcrustesFit procrustes(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("procrustes: A and B must have the same shape");
  }
  const Eigen::Index d = a.cols();
  const Eigen::MatrixXd m = a.transpose() * b;
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
    std::cerr << "warning: procrustes input is degenerate (A^T B = 0), "
                 "returning identity\n";
    return {Matrix::Identity(d, d), true};
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    Eigen::Index pivot = 0;
    u.col(i).cwiseAbs().maxCoeff(&pivot);
    if (u(pivot, i) < 0.0) {
      u.col(i) *= -1.0;
      v.col(i) *= -1.0;
    }
  }
  return {Matrix(u * v.transpose()), false};
}

const EmbeddingSlice *AlignedSeries::find(std::string_view label) const {
  for (const auto &s : slices) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

std::vector<std::string> AlignedSeries::labels() const {
  std::vector<std::string> out;
  for (const auto &s : slices) out.push_back(s.label);
  return out;
}

std::vector<std::string> shared_vocabulary(const EmbeddingSlice &a,
                                           const EmbeddingSlice &b,
                                           std::size_t top_n) {
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (std::size_t i = 0; i < a.vocab.size(); ++i) {
    if (auto j = b.vocab.find(a.vocab.word(i))) {
      ranked.emplace_back(i + *j, a.vocab.word(i));
    }
  }
  std::sort(ranked.begin(), ranked.end());
  if (top_n > 0 && ranked.size() > top_n) ranked.resize(top_n);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto &r : ranked) out.push_back(std::move(r.second));
  return out;
}

namespace {

Matrix gather_rows(const EmbeddingSlice &s, const std::vector<std::string> &words) {
  Matrix out(static_cast<Eigen::Index>(words.size()), s.dim());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        s.matrix.row(static_cast<Eigen::Index>(*s.vocab.find(words[i])));
  }
  return out;
}

}  // namespace

AlignmentResult align_series(std::vector<EmbeddingSlice> slices,
                             std::optional<std::string> anchor,
                             std::size_t shared_top, Exec exec) {
  if (slices.size() < 2) throw InvalidArgument("alignment needs at least two slices");
  std::sort(slices.begin(), slices.end(),
            [](const auto &a, const auto &b) { return a.label < b.label; });
  std::set<std::string> labels;
  for (const auto &s : slices) {
    if (!labels.insert(s.label).second) {
      throw InvalidArgument("duplicate slice label " + s.label);
    }
    if (s.dim() != slices.front().dim()) {
      throw InvalidArgument("slices have different embedding dimensions");
    }
  }
  const std::string anchor_label = anchor.value_or(slices.back().label);
  const auto anchor_it = std::find_if(slices.begin(), slices.end(), [&](const auto &s) {
    return s.label == anchor_label;
  });
  if (anchor_it == slices.end()) throw UnknownSlice(anchor_label);
  const long n = static_cast<long>(slices.size());
  const long anchor_idx = anchor_it - slices.begin();
  const auto d = static_cast<std::size_t>(slices.front().dim());

  // fits[t] maps slice t one step toward the anchor.
  std::vector<Matrix> fits(n);
  std::vector<SharedVocabulary> shared(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::kParallel)
  for (long t = 0; t < n; ++t) {
    if (t == anchor_idx) continue;
    try {
      const long next = t < anchor_idx ? t + 1 : t - 1;
      auto words = shared_vocabulary(slices[t], slices[next], shared_top);
      if (words.size() < d) {
        throw InsufficientOverlap(slices[t].label, slices[next].label,
                                  words.size(), d);
      }
      fits[t] = procrustes(gather_rows(slices[t], words),
                           gather_rows(slices[next], words))
                    .rotation;
      shared[t] = {slices[t].label, slices[next].label, std::move(words)};
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Matrix> composed(n);
  composed[anchor_idx] = Matrix::Identity(d, d);
  for (long t = anchor_idx - 1; t >= 0; --t) composed[t] = fits[t] * composed[t + 1];
  for (long t = anchor_idx + 1; t < n; ++t) composed[t] = fits[t] * composed[t - 1];

  AlignmentResult result;
  result.map.anchor = anchor_label;
  for (long t = 0; t < n; ++t) {
    result.map.transforms[slices[t].label] = composed[t];
    if (t != anchor_idx) result.map.shared_vocab.push_back(std::move(shared[t]));
    slices[t].matrix = slices[t].matrix * composed[t];
    slices[t].aligned_to = anchor_label;
  }
  result.series.slices = std::move(slices);
  return result;
}

double max_orthogonality_error(const Matrix &q) {
  const Matrix e = q.transpose() * q - Matrix::Identity(q.cols(), q.cols());
  return e.cwiseAbs().maxCoeff();
}

void write_matrix(const Matrix &m, std::ostream &out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace newstrend
