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
#include "newstrend/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace newstrend::kernels {

void cosine_scan(const Matrix &rows, const Vector &query, std::span<double> out,
                 Exec exec) {
  if (static_cast<Eigen::Index>(out.size()) != rows.rows() ||
      query.size() != rows.cols()) {
    throw std::invalid_argument("cosine_scan: shape mismatch");
  }
  const double qnorm = query.norm();
  const long n = static_cast<long>(rows.rows());
  const long d = static_cast<long>(rows.cols());
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (long i = 0; i < n; ++i) {
    double dot = 0.0, norm2 = 0.0;
    for (long k = 0; k < d; ++k) {
      const double v = rows(i, k);
      dot += v * query[k];
      norm2 += v * v;
    }
    const double denom = std::sqrt(norm2) * qnorm;
    out[i] = denom > 0.0 ? dot / denom : 0.0;
  }
}

Matrix squared_distances(const Matrix &x, Exec exec) {
  const long n = static_cast<long>(x.rows());
  const long d = static_cast<long>(x.cols());
  Matrix out(n, n);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      double s = 0.0;
      for (long k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        s += diff * diff;
      }
      out(i, j) = s;
    }
  }
  return out;
}

double tsne_gradient(const Matrix &p, const Matrix &y, double exaggeration,
                     Matrix &grad, Exec exec) {
  const long n = static_cast<long>(y.rows());
  Matrix num(n, n);
  std::vector<double> row_sum(n, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (long j = 0; j < n; ++j) {
      if (i == j) {
        num(i, j) = 0.0;
        continue;
      }
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      num(i, j) = 1.0 / (1.0 + dx * dx + dy * dy);
      s += num(i, j);
    }
    row_sum[i] = s;
  }
  double z = 0.0;
  for (double s : row_sum) z += s;

  grad.resize(n, 2);
  std::vector<double> kl_row(n, 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (long i = 0; i < n; ++i) {
    double gx = 0.0, gy = 0.0, kl = 0.0;
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(num(i, j) / z, 1e-300);
      const double mult = (exaggeration * p(i, j) - q) * num(i, j);
      gx += mult * (y(i, 0) - y(j, 0));
      gy += mult * (y(i, 1) - y(j, 1));
      if (p(i, j) > 0.0) kl += p(i, j) * std::log(p(i, j) / q);
    }
    grad(i, 0) = 4.0 * gx;
    grad(i, 1) = 4.0 * gy;
    kl_row[i] = kl;
  }
  double kl = 0.0;
  for (double v : kl_row) kl += v;
  return kl;
}

}  // namespace newstrend::kernels
