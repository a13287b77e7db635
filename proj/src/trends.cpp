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
#include "newstrend/trends.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "newstrend/errors.hpp"
#include "newstrend/kernels.hpp"

namespace newstrend {

std::vector<Neighbor> nearest(const EmbeddingSlice &slice, std::string_view key,
                              std::size_t n, Exec exec) {
  const auto key_idx = slice.vocab.find(key);
  if (!key_idx) throw OutOfVocabulary(std::string(key));
  std::vector<double> sims(slice.vocab.size());
  const Vector query = slice.matrix.row(static_cast<Eigen::Index>(*key_idx)).transpose();
  kernels::cosine_scan(slice.matrix, query, sims, exec);

  std::vector<std::size_t> order;
  order.reserve(sims.size());
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (i != *key_idx) order.push_back(i);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    return slice.vocab.word(a) < slice.vocab.word(b);
  };
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(take),
                    order.end(), better);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({slice.vocab.word(order[i]), sims[order[i]]});
  }
  return out;
}

NeighborTable neighbors(const AlignedSeries &series, std::string_view key,
                        std::size_t n, Exec exec) {
  NeighborTable table{std::string(key), n, {}};
  bool seen = false;
  for (const auto &s : series.slices) {
    SliceNeighbors row{s.label, {}};
    if (s.contains(key)) {
      seen = true;
      row.neighbors = nearest(s, key, n, exec);
    }
    table.slices.push_back(std::move(row));
  }
  if (!seen) throw UnknownWord(std::string(key));
  return table;
}

std::vector<std::optional<double>> similarity_series(const AlignedSeries &series,
                                                     std::string_view key,
                                                     std::string_view other) {
  std::vector<std::optional<double>> out;
  out.reserve(series.slices.size());
  for (const auto &s : series.slices) {
    if (s.contains(key) && s.contains(other)) {
      out.emplace_back(cosine(s, key, other));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

double drift(std::span<const double> values) {
  if (values.size() < 2) throw TooFewSlices();
  double total = 0.0;
  for (std::size_t t = 1; t < values.size(); ++t) {
    total += std::abs(values[t] - values[t - 1]);
  }
  return total;
}

DriftReport top_drift_words(const AlignedSeries &series, std::string_view key,
                            std::size_t pool_n, std::size_t k, Exec exec) {
  if (pool_n == 0 || k == 0) throw InvalidArgument("pool and top must be positive");
  if (series.slices.size() < 2) throw TooFewSlices();
  for (const auto &s : series.slices) {
    if (!s.contains(key)) throw UnknownWord(std::string(key));
  }

  std::set<std::string> pool;
  for (const auto &s : series.slices) {
    for (auto &nb : nearest(s, key, pool_n, exec)) pool.insert(std::move(nb.word));
  }
  std::erase_if(pool, [&](const std::string &w) {
    return std::any_of(series.slices.begin(), series.slices.end(),
                       [&](const auto &s) { return !s.contains(w); });
  });

  DriftReport report;
  report.key = std::string(key);
  report.slices = series.labels();
  std::vector<DriftCandidate> scored;
  std::map<std::string, std::vector<double>> all_series;
  for (const auto &w : pool) {
    std::vector<double> values;
    values.reserve(series.slices.size());
    for (const auto &s : series.slices) values.push_back(cosine(s, key, w));
    scored.push_back({w, drift(values)});
    all_series.emplace(w, std::move(values));
  }
  std::sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
    if (a.drift != b.drift) return a.drift > b.drift;
    return a.word < b.word;
  });
  if (scored.size() > k) scored.resize(k);
  for (const auto &c : scored) report.series[c.word] = all_series[c.word];
  report.candidates = std::move(scored);
  return report;
}

}  // namespace newstrend
