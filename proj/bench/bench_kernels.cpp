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

// Serial vs OpenMP timings for the hot kernels. Argument 0 = serial,
// 1 = parallel.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "newstrend/embeddings.hpp"
#include "newstrend/kernels.hpp"

namespace {

using newstrend::Exec;
using newstrend::Matrix;
using newstrend::Vector;

Exec exec_of(const benchmark::State &state) {
  return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

void BM_CosineScan(benchmark::State &state) {
  const Matrix rows = random_matrix(state.range(1), 100, 1);
  const Vector query = random_matrix(100, 1, 2).col(0);
  std::vector<double> out(static_cast<std::size_t>(rows.rows()));
  for (auto _ : state) {
    newstrend::kernels::cosine_scan(rows, query, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * rows.rows());
}
BENCHMARK(BM_CosineScan)->ArgsProduct({{0, 1}, {10000, 100000}});

void BM_SquaredDistances(benchmark::State &state) {
  const Matrix x = random_matrix(state.range(1), 100, 3);
  for (auto _ : state) {
    auto d = newstrend::kernels::squared_distances(x, exec_of(state));
    benchmark::DoNotOptimize(d.data());
  }
}
BENCHMARK(BM_SquaredDistances)->ArgsProduct({{0, 1}, {200, 1000}});

void BM_TsneGradient(benchmark::State &state) {
  const auto n = state.range(1);
  Matrix p = random_matrix(n, n, 4).cwiseAbs();
  p = (p + p.transpose()).eval();
  p.diagonal().setZero();
  p /= p.sum();
  const Matrix y = random_matrix(n, 2, 5) * 1e-2;
  Matrix grad(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        newstrend::kernels::tsne_gradient(p, y, 1.0, grad, exec_of(state)));
  }
}
BENCHMARK(BM_TsneGradient)->ArgsProduct({{0, 1}, {200, 1000}});

void BM_TrainSlice(benchmark::State &state) {
  std::mt19937_64 rng(6);
  newstrend::TokenStream sentences;
  for (int s = 0; s < 2000; ++s) {
    std::vector<std::string> sentence;
    for (int k = 0; k < 20; ++k) sentence.push_back("w" + std::to_string(rng() % 500));
    sentences.push_back(sentence);
  }
  newstrend::TrainConfig config;
  config.epochs = 1;
  config.exec = exec_of(state);
  for (auto _ : state) {
    auto r = newstrend::train_slice(sentences, "2019-01", config);
    benchmark::DoNotOptimize(r.slice.matrix.data());
  }
  state.SetItemsProcessed(state.iterations() * 40000);
}
BENCHMARK(BM_TrainSlice)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
