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

#ifndef NEWSTREND_TYPES_HPP_
#define NEWSTREND_TYPES_HPP_

#include <Eigen/Dense>

namespace newstrend {

// Dense row-major matrix; embedding matrices store one word per row.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Execution policy for the data-parallel kernels. kSerial is the reference
// path and the only one with a bitwise-determinism guarantee for training.
enum class Exec { kSerial, kParallel };

}  // namespace newstrend

#endif  // NEWSTREND_TYPES_HPP_
