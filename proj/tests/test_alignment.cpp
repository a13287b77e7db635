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
#include <sstream>

#include "doctest.h"
#include "newstrend/alignment.hpp"
#include "newstrend/errors.hpp"
#include "oracles.hpp"

using namespace newstrend;

namespace {

EmbeddingSlice make_slice(std::string label, std::vector<std::string> words, Matrix m) {
  EmbeddingSlice e;
  e.label = std::move(label);
  std::vector<long> counts(words.size());
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = static_cast<long>(1000 - i);
  e.vocab = Vocabulary(std::move(words), counts);
  e.matrix = std::move(m);
  return e;
}

std::vector<std::string> words(int n, const std::string &prefix = "w") {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("procrustes identity and known rotation") {
  std::mt19937_64 rng(1);
  Matrix a = oracle::gaussian(20, 2, rng);
  CHECK(max_abs(procrustes(a, a).rotation - Matrix::Identity(2, 2)) <= 1e-9);

  Matrix r(2, 2);
  r << 0, -1, 1, 0;  // 90 degrees
  auto fit = procrustes(a, a * r);
  CHECK_FALSE(fit.degenerate);
  CHECK(max_abs(fit.rotation - r) <= 1e-9);
}

TEST_CASE("procrustes recovers random rotations") {
  std::mt19937_64 rng(2);
  for (int d : {2, 10, 50}) {
    Matrix a = oracle::gaussian(4 * d, d, rng);
    Matrix r = oracle::random_orthogonal(d, rng);
    auto q = procrustes(a, a * r).rotation;
    CHECK(max_abs(q - r) <= 1e-6);
    CHECK(max_orthogonality_error(q) <= 1e-6);
  }
}

TEST_CASE("procrustes beats random orthogonal matrices") {
  std::mt19937_64 rng(3);
  Matrix a = oracle::gaussian(50, 4, rng);
  Matrix b = oracle::gaussian(50, 4, rng);
  auto q = procrustes(a, b).rotation;
  const double best = (a * q - b).norm();
  CHECK(best <= (a - b).norm());
  CHECK((a * q).norm() == doctest::Approx(a.norm()).epsilon(1e-9));
  for (int i = 0; i < 1000; ++i) {
    Matrix other = oracle::random_orthogonal(4, rng);
    CHECK(best <= (a * other - b).norm() + 1e-12);
  }
}

TEST_CASE("procrustes on zero cross-covariance returns identity") {
  Matrix a = Matrix::Zero(5, 3);
  std::mt19937_64 rng(4);
  auto fit = procrustes(a, oracle::gaussian(5, 3, rng));
  CHECK(fit.degenerate);
  CHECK(fit.rotation == Matrix::Identity(3, 3));
  CHECK_THROWS_AS(procrustes(Matrix::Zero(5, 3), Matrix::Zero(4, 3)), InvalidArgument);
}

TEST_CASE("identical slices align with identity") {
  std::mt19937_64 rng(5);
  Matrix m = oracle::gaussian(30, 5, rng);
  auto r = align_series({make_slice("2019-01", words(30), m), make_slice("2019-02", words(30), m)});
  CHECK(r.map.anchor == "2019-02");
  for (const auto &[label, t] : r.map.transforms) CHECK(max_abs(t - Matrix::Identity(5, 5)) <= 1e-9);
  CHECK(r.series.find("2019-01")->aligned_to == "2019-02");
}

TEST_CASE("three rotated slices align into the anchor frame") {
  std::mt19937_64 rng(6);
  const int d = 10;
  Matrix w1 = oracle::gaussian(200, d, rng);
  Matrix r1 = oracle::random_orthogonal(d, rng);
  Matrix r2 = oracle::random_orthogonal(d, rng);
  Matrix w2 = w1 * r1;
  Matrix w3 = w2 * r2;
  auto res = align_series({make_slice("2019-01", words(200), w1), make_slice("2019-02", words(200), w2),
                           make_slice("2019-03", words(200), w3)},
                          std::string("2019-01"));
  // Row vectors: w3 = w1 (R1 R2), so mapping slice 3 back is (R1 R2)^-1.
  Matrix expected = (r1 * r2).transpose();
  CHECK(max_abs(res.map.transforms.at("2019-03") - expected) <= 1e-6);
  CHECK(max_abs(res.map.transforms.at("2019-01") - Matrix::Identity(d, d)) <= 1e-12);
  for (const auto &s : res.series.slices) {
    CHECK(max_abs(s.matrix - w1) <= 1e-6);
    CHECK(max_orthogonality_error(res.map.transforms.at(s.label)) <= 1e-6);
  }
  REQUIRE(res.map.shared_vocab.size() == 2);
  CHECK(res.map.shared_vocab[0].words.size() == 200);
}

TEST_CASE("within-slice cosines survive alignment") {
  std::mt19937_64 rng(7);
  std::vector<EmbeddingSlice> slices;
  for (const char *label : {"2018-12", "2019-01", "2019-02"}) {
    slices.push_back(make_slice(label, words(60), oracle::gaussian(60, 8, rng)));
  }
  auto res = align_series(slices, std::nullopt, 5000, Exec::kParallel);
  for (std::size_t s = 0; s < slices.size(); ++s) {
    for (int i = 0; i < 60; i += 7) {
      for (int j = 0; j < 60; j += 5) {
        const double before = oracle::cosine(slices[s].matrix.row(i).transpose(), slices[s].matrix.row(j).transpose());
        const double after = oracle::cosine(res.series.slices[s].matrix.row(i).transpose(),
                                            res.series.slices[s].matrix.row(j).transpose());
        CHECK(std::fabs(before - after) <= 1e-9);
      }
    }
  }
  auto serial = align_series(slices, std::nullopt, 5000, Exec::kSerial);
  for (std::size_t s = 0; s < slices.size(); ++s) {
    CHECK(serial.series.slices[s].matrix == res.series.slices[s].matrix);
  }
}

TEST_CASE("words absent from a slice stay absent") {
  std::mt19937_64 rng(8);
  auto a = words(40);
  auto b = words(40);
  b.push_back("only_in_b");
  auto res = align_series({make_slice("2019-01", a, oracle::gaussian(40, 4, rng)),
                           make_slice("2019-02", b, oracle::gaussian(41, 4, rng))});
  CHECK_FALSE(res.series.find("2019-01")->contains("only_in_b"));
  CHECK(res.series.find("2019-02")->contains("only_in_b"));
}

TEST_CASE("shared vocabulary respects top_n") {
  std::mt19937_64 rng(9);
  auto x = make_slice("a", words(50), oracle::gaussian(50, 3, rng));
  auto y = make_slice("b", words(50), oracle::gaussian(50, 3, rng));
  CHECK(shared_vocabulary(x, y, 10).size() == 10);
  CHECK(shared_vocabulary(x, y, 10)[0] == "w0");
}

TEST_CASE("alignment errors") {
  std::mt19937_64 rng(10);
  auto a = make_slice("2019-01", words(20, "a"), oracle::gaussian(20, 8, rng));
  auto b = make_slice("2019-02", words(20, "b"), oracle::gaussian(20, 8, rng));
  CHECK_THROWS_AS(align_series({a, b}), InsufficientOverlap);
  auto c = make_slice("2019-02", words(20, "a"), oracle::gaussian(20, 8, rng));
  CHECK_THROWS_AS(align_series({a, c}, std::string("2020-01")), UnknownSlice);
  CHECK_THROWS_AS(align_series({a, c}, std::nullopt, 5), InsufficientOverlap);
}

TEST_CASE("transform export") {
  std::ostringstream out;
  write_matrix(Matrix::Identity(2, 2), out);
  CHECK(out.str() == "2 2\n1 0\n0 1\n");
}
