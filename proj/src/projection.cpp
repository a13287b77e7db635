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
#include "newstrend/projection.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "newstrend/errors.hpp"
#include "newstrend/kernels.hpp"
#include "newstrend/trends.hpp"

namespace newstrend {

std::string short_slice_label(std::string_view label) {
  static const char *kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (label.size() != 7 || label[4] != '-') return std::string(label);
  const int month = (label[5] - '0') * 10 + (label[6] - '0');
  if (month < 1 || month > 12) return std::string(label);
  return std::string(kMonths[month - 1]) + std::string(label.substr(2, 2));
}

LabeledPointSet pool_neighbors(const AlignedSeries &series, std::string_view key,
                               std::size_t n) {
  LabeledPointSet set;
  bool seen = false;
  for (const auto &s : series.slices) {
    if (!s.contains(key)) continue;
    seen = true;
    const auto tag = short_slice_label(s.label);
    set.points.push_back({std::string(key) + "_" + tag, std::string(key), s.label,
                          Vector(s.row(key))});
    for (const auto &nb : nearest(s, key, n)) {
      set.points.push_back({nb.word + "_" + tag, nb.word, s.label,
                            Vector(s.row(nb.word))});
    }
  }
  if (!seen) throw UnknownWord(std::string(key));
  return set;
}

Matrix conditional_affinities(const Matrix &sq, double perplexity) {
  const Eigen::Index n = sq.rows();
  const double target = std::log(perplexity);
  Matrix p = Matrix::Zero(n, n);
  std::vector<double> row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double min_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) min_d = std::min(min_d, sq(i, j));
    }
    // Distance gaps at rounding level count as ties.
    const double tie = 1e-12 * min_d;
    double beta = 1.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        double shifted = sq(i, j) - min_d;
        if (shifted <= tie) shifted = 0.0;
        row[j] = std::exp(-beta * shifted);
        sum += row[j];
        weighted += shifted * row[j];
      }
      // Entropy of the row distribution, in nats.
      const double entropy = std::log(sum) + beta * weighted / sum;
      for (Eigen::Index j = 0; j < n; ++j) p(i, j) = row[j] / sum;
      const double diff = entropy - target;
      if (std::abs(diff) < 1e-10) break;
      if (diff > 0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  return p;
}

Projection2D tsne(const LabeledPointSet &points, const TsneParams &params) {
  const std::size_t n = points.points.size();
  if (n < 3) throw TooFewPoints(n);
  if (!(params.perplexity > 0.0) ||
      params.perplexity >= static_cast<double>(n - 1) / 3.0) {
    throw PerplexityTooHigh(params.perplexity, n);
  }
  if (params.iterations < 1) throw InvalidArgument("iterations must be positive");

  const auto dim = points.points.front().vector.size();
  Matrix x(static_cast<Eigen::Index>(n), dim);
  std::set<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const auto &pt = points.points[i];
    if (pt.vector.size() != dim || !pt.vector.allFinite()) {
      throw InvalidArgument("point " + pt.label + " has a bad vector");
    }
    if (!labels.insert(pt.label).second) {
      throw InvalidArgument("duplicate point label " + pt.label);
    }
    x.row(static_cast<Eigen::Index>(i)) = pt.vector.transpose();
  }

  const Matrix cond =
      conditional_affinities(kernels::squared_distances(x, params.exec),
                             params.perplexity);
  Matrix p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  p = p.cwiseMax(1e-12);
  p.diagonal().setZero();

  const auto N = static_cast<Eigen::Index>(n);
  Matrix y(N, 2);
  std::mt19937_64 rng(params.seed);
  auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  for (Eigen::Index i = 0; i < N; ++i) {
    // Box-Muller keeps the initialization independent of the library's
    // normal_distribution.
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * M_PI * uniform();
    y(i, 0) = params.init_sigma * r * std::cos(theta);
    y(i, 1) = params.init_sigma * r * std::sin(theta);
  }

  Matrix update = Matrix::Zero(N, 2);
  Matrix gains = Matrix::Ones(N, 2);
  Matrix grad;
  Projection2D out;
  out.params = params;
  out.kl_history.reserve(params.iterations);
  for (int iter = 0; iter < params.iterations; ++iter) {
    const bool early = iter < params.exaggeration_iterations;
    const double exaggeration = early ? params.early_exaggeration : 1.0;
    const double momentum = early ? 0.5 : 0.8;
    out.kl_history.push_back(
        kernels::tsne_gradient(p, y, exaggeration, grad, params.exec));
    for (Eigen::Index i = 0; i < N; ++i) {
      for (int k = 0; k < 2; ++k) {
        const bool same_sign = (grad(i, k) > 0.0) == (update(i, k) > 0.0);
        gains(i, k) = same_sign ? std::max(gains(i, k) * 0.8, 0.01) : gains(i, k) + 0.2;
        update(i, k) = momentum * update(i, k) -
                       params.learning_rate * gains(i, k) * grad(i, k);
        y(i, k) += update(i, k);
      }
    }
    const Eigen::RowVector2d mean = y.colwise().mean();
    y.rowwise() -= mean;
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.labels.push_back(points.points[i].label);
    out.coords.push_back({y(static_cast<Eigen::Index>(i), 0),
                          y(static_cast<Eigen::Index>(i), 1)});
  }
  return out;
}

}  // namespace newstrend
