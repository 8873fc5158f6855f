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

#pragma once

#include "augpdg/core.hpp"

namespace augpdg {

/// Q = [[I_n, delta J^T], [delta J, I_m]] for an m x n Jacobian J.
inline Mat q_delta(const Mat& jacobian, double delta) {
  const Index m = jacobian.rows();
  const Index n = jacobian.cols();
  Mat q = Mat::Identity(n + m, n + m);
  q.topRightCorner(n, m) = delta * jacobian.transpose();
  q.bottomLeftCorner(m, n) = delta * jacobian;
  return q;
}

/// z^T Q_delta z for z = (x - x*, lambda - lambda*), expanded as
/// |dx|^2 + |dlambda|^2 + 2 delta dx^T J^T dlambda. No definiteness check;
/// see lyapunov_value() in certificate.hpp for the checked entry point.
template <typename DX, typename DL>
double lyapunov_form(const Eigen::MatrixBase<DX>& dx,
                     const Eigen::MatrixBase<DL>& dlambda, const Mat& jacobian,
                     double delta) {
  return dx.squaredNorm() + dlambda.squaredNorm() +
         2.0 * delta * dlambda.dot(jacobian * dx);
}

}  // namespace augpdg
