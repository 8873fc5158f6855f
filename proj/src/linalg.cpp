// Copyright 2026 The augpdg Authors
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

#include "augpdg/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace augpdg {

EigExtremes sym_eig_extremes(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InputError("sym_eig_extremes: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InputError("sym_eig_extremes: matrix is not symmetric (asymmetry " +
                     std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InputError("sym_eig_extremes: eigensolver did not converge");
  }
  // Eigenvalues come back sorted ascending.
  return {solver.eigenvalues()[0], solver.eigenvalues()[m.rows() - 1]};
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()[0];
}

}  // namespace augpdg
