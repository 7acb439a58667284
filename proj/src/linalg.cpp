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

#include "evcomb/linalg.hpp"

#include <Eigen/Dense>

namespace evcomb {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t RankFromSingularValues(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::vector<double>> OrthonormalNullSpace(const DenseMatrix& matrix,
                                                      double relative_tolerance) {
  const auto n = static_cast<Eigen::Index>(matrix.cols);
  std::vector<std::vector<double>> basis;
  if (n == 0) return basis;
  if (matrix.rows == 0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<double> e(matrix.cols, 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  Eigen::Map<const RowMatrix> a(matrix.values.data(),
                                static_cast<Eigen::Index>(matrix.rows), n);
  // Full V is needed: the null space lives in its trailing columns.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const std::size_t rank =
      RankFromSingularValues(svd.singularValues(), relative_tolerance);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index c = static_cast<Eigen::Index>(rank); c < n; ++c) {
    std::vector<double> col(matrix.cols);
    for (Eigen::Index r = 0; r < n; ++r) col[static_cast<std::size_t>(r)] = v(r, c);
    basis.push_back(std::move(col));
  }
  return basis;
}

std::size_t NumericalRank(const DenseMatrix& matrix, double relative_tolerance) {
  if (matrix.rows == 0 || matrix.cols == 0) return 0;
  Eigen::Map<const RowMatrix> a(matrix.values.data(),
                                static_cast<Eigen::Index>(matrix.rows),
                                static_cast<Eigen::Index>(matrix.cols));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return RankFromSingularValues(svd.singularValues(), relative_tolerance);
}

}  // namespace evcomb
