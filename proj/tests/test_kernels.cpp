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
#include <vector>

#include "doctest.h"
#include "newstrend/kernels.hpp"
#include "oracles.hpp"

using namespace newstrend;

TEST_CASE("cosine scan: serial, parallel and reference agree") {
  std::mt19937_64 rng(30);
  Matrix rows = oracle::gaussian(2000, 24, rng);
  rows.row(5).setZero();
  Vector q = oracle::gaussian(24, 1, rng).col(0);
  std::vector<double> s(2000), p(2000);
  kernels::cosine_scan(rows, q, s, Exec::kSerial);
  kernels::cosine_scan(rows, q, p, Exec::kParallel);
  CHECK(s == p);
  CHECK(s[5] == 0.0);
  for (int i = 0; i < 2000; i += 37) {
    CHECK(s[i] == doctest::Approx(oracle::cosine(rows.row(i).transpose(), q)).epsilon(1e-12));
  }
}

TEST_CASE("squared distances") {
  std::mt19937_64 rng(31);
  Matrix x = oracle::gaussian(50, 7, rng);
  auto s = kernels::squared_distances(x, Exec::kSerial);
  CHECK(s == kernels::squared_distances(x, Exec::kParallel));
  for (int i = 0; i < 50; ++i) {
    CHECK(s(i, i) == 0.0);
    for (int j = 0; j < 50; ++j) {
      CHECK(s(i, j) == s(j, i));
      CHECK(s(i, j) == doctest::Approx((x.row(i) - x.row(j)).squaredNorm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("t-SNE gradient matches finite differences of KL") {
  std::mt19937_64 rng(32);
  const int n = 12;
  Matrix p = oracle::gaussian(n, n, rng).cwiseAbs();
  p = (p + p.transpose()).eval();
  p.diagonal().setZero();
  p /= p.sum();
  Matrix y = oracle::gaussian(n, 2, rng);
  Matrix grad, other;
  const double kl = kernels::tsne_gradient(p, y, 1.0, grad, Exec::kSerial);
  CHECK(kernels::tsne_gradient(p, y, 1.0, other, Exec::kParallel) == kl);
  CHECK(grad == other);
  const double h = 1e-6;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      Matrix up = y, down = y, g;
      up(i, k) += h;
      down(i, k) -= h;
      const double numeric = (kernels::tsne_gradient(p, up, 1.0, g, Exec::kSerial) -
                              kernels::tsne_gradient(p, down, 1.0, g, Exec::kSerial)) /
                             (2 * h);
      CHECK(grad(i, k) == doctest::Approx(numeric).epsilon(1e-5));
    }
  }
}
