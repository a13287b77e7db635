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
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "newstrend/errors.hpp"
#include "newstrend/projection.hpp"
#include "oracles.hpp"

using namespace newstrend;

namespace {

EmbeddingSlice make_slice(std::string label, std::vector<std::string> words, Matrix m) {
  EmbeddingSlice e;
  e.label = std::move(label);
  e.vocab = Vocabulary(std::move(words), std::vector<long>(m.rows(), 1));
  e.matrix = std::move(m);
  return e;
}

LabeledPointSet points_of(const Matrix &m) {
  LabeledPointSet set;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    set.points.push_back({"p" + std::to_string(i), "p" + std::to_string(i), "2019-01",
                          Vector(m.row(i).transpose())});
  }
  return set;
}

double dist(const std::array<double, 2> &a, const std::array<double, 2> &b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

TEST_CASE("short slice labels") {
  CHECK(short_slice_label("2019-03") == "Mar19");
  CHECK(short_slice_label("2018-12") == "Dec18");
}

TEST_CASE("pool_neighbors counts and labels") {
  std::mt19937_64 rng(20);
  AlignedSeries s{{make_slice("2019-02", {"max", "boeing", "737", "jet"}, oracle::gaussian(4, 3, rng)),
                   make_slice("2019-03", {"max", "boeing", "737", "jet"}, oracle::gaussian(4, 3, rng))}};
  auto p = pool_neighbors(s, "max", 2);
  CHECK(p.points.size() == 6);
  std::set<std::string> labels;
  for (const auto &x : p.points) labels.insert(x.label);
  CHECK(labels.size() == p.points.size());
  CHECK(labels.contains("max_Mar19"));
  CHECK(labels.contains("max_Feb19"));

  AlignedSeries partial{{make_slice("2019-02", {"a", "b"}, oracle::gaussian(2, 3, rng)),
                         make_slice("2019-03", {"max", "b"}, oracle::gaussian(2, 3, rng))}};
  auto q = pool_neighbors(partial, "max", 5);
  CHECK(q.points.size() == 2);
  CHECK_THROWS_AS(pool_neighbors(partial, "zebra", 5), UnknownWord);
}

TEST_CASE("max shifts toward boeing in March") {
  Matrix feb(4, 2), mar(4, 2);
  // February: "max" sits with names; March: with the aircraft.
  feb << 1, 0, 0.95, 0.1, -0.1, 1, 0, 1;
  mar << 0, 1, 0.95, 0.1, -0.1, 1, 0.05, 1;
  AlignedSeries s{{make_slice("2019-02", {"max", "verstappen", "boeing", "737"}, feb),
                   make_slice("2019-03", {"max", "verstappen", "boeing", "737"}, mar)}};
  auto p = pool_neighbors(s, "max", 2);
  std::set<std::string> labels;
  for (const auto &x : p.points) labels.insert(x.label);
  CHECK(labels.contains("max_Mar19"));
  CHECK(labels.contains("boeing_Mar19"));
  CHECK(labels.contains("737_Mar19"));
  CHECK(labels.contains("verstappen_Feb19"));
}

TEST_CASE("tsne preconditions") {
  std::mt19937_64 rng(21);
  TsneParams p;
  CHECK_THROWS_AS(tsne(points_of(oracle::gaussian(2, 3, rng)), p), TooFewPoints);
  p.perplexity = 3.0;
  CHECK_THROWS_AS(tsne(points_of(oracle::gaussian(10, 3, rng)), p), PerplexityTooHigh);
  p.perplexity = 2.9;
  CHECK_NOTHROW(tsne(points_of(oracle::gaussian(10, 3, rng)), p));
}

TEST_CASE("equilateral triangle stays equilateral") {
  Matrix m(3, 2);
  m << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2.0;
  TsneParams p;
  p.perplexity = 0.5;
  auto r = tsne(points_of(m), p);
  const double a = dist(r.coords[0], r.coords[1]);
  const double b = dist(r.coords[1], r.coords[2]);
  const double c = dist(r.coords[0], r.coords[2]);
  const double lo = std::min({a, b, c}), hi = std::max({a, b, c});
  CHECK(lo > 0.0);
  CHECK((hi - lo) / hi <= 0.05);
}

TEST_CASE("equilateral symmetry across seeds with a longer schedule") {
  Matrix m(3, 2);
  m << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2.0;
  TsneParams p;
  p.perplexity = 0.5;
  p.iterations = 3000;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    auto r = tsne(points_of(m), p);
    const double a = dist(r.coords[0], r.coords[1]);
    const double b = dist(r.coords[1], r.coords[2]);
    const double c = dist(r.coords[0], r.coords[2]);
    CHECK((std::max({a, b, c}) - std::min({a, b, c})) / std::max({a, b, c}) <= 0.05);
  }
}

TEST_CASE("separated clusters, determinism and monotone KL tail") {
  std::mt19937_64 rng(22);
  Matrix m(20, 10);
  Matrix centers = oracle::gaussian(2, 10, rng);
  centers.row(1) = centers.row(0) + Eigen::RowVectorXd::Constant(10, 10.0 / std::sqrt(10.0));
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<int> label;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 10; ++j) m(i, j) = centers(i / 10, j) + g(rng);
    label.push_back(i / 10);
  }
  TsneParams p;
  p.perplexity = 5.0;
  auto a = tsne(points_of(m), p);
  auto b = tsne(points_of(m), p);
  CHECK(a.coords == b.coords);
  CHECK(oracle::silhouette(a.coords, label) > 0.8);
  REQUIRE(a.labels.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.labels[i] == "p" + std::to_string(i));
    CHECK(std::isfinite(a.coords[i][0]));
    CHECK(std::isfinite(a.coords[i][1]));
  }
  REQUIRE(a.kl_history.size() == static_cast<std::size_t>(p.iterations));
  for (std::size_t t = a.kl_history.size() / 2 + 1; t < a.kl_history.size(); ++t) {
    CHECK(a.kl_history[t] <= a.kl_history[t - 1] + 1e-12);
  }
  p.seed = 7;
  CHECK(tsne(points_of(m), p).coords != a.coords);
  p.exec = Exec::kParallel;
  p.seed = 42;
  CHECK(tsne(points_of(m), p).coords == a.coords);
}

TEST_CASE("affinities hit the target perplexity") {
  std::mt19937_64 rng(23);
  Matrix x = oracle::gaussian(30, 5, rng);
  Matrix sq(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) sq(i, j) = (x.row(i) - x.row(j)).squaredNorm();
  auto p = conditional_affinities(sq, 8.0);
  for (int i = 0; i < 30; ++i) {
    CHECK(p(i, i) == 0.0);
    CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    double h = 0.0;
    for (int j = 0; j < 30; ++j)
      if (p(i, j) > 0) h -= p(i, j) * std::log(p(i, j));
    CHECK(std::exp(h) == doctest::Approx(8.0).epsilon(1e-4));
  }
}
