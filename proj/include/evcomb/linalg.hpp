// Copyright 2026 The evcomb Authors
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

#ifndef EVCOMB_LINALG_HPP_
#define EVCOMB_LINALG_HPP_

#include <cstddef>
#include <vector>

namespace evcomb {

// Dense row-major matrix of `rows` x `cols` doubles.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return values[r * cols + c];
  }
};

// Orthonormal basis (one vector per entry, each of length `matrix.cols`) of
// {x : matrix * x = 0}. Rank is decided by singular values below
// `relative_tolerance` times the largest one.
std::vector<std::vector<double>> OrthonormalNullSpace(
    const DenseMatrix& matrix, double relative_tolerance = 1e-10);

std::size_t NumericalRank(const DenseMatrix& matrix,
                          double relative_tolerance = 1e-10);

}  // namespace evcomb

#endif  // EVCOMB_LINALG_HPP_
