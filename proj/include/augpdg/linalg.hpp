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

struct EigExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue of a symmetric matrix. Throws InputError
/// when the largest entry of |M - M^T| exceeds 1e-12 * max(1, max|M_ij|).
EigExtremes sym_eig_extremes(const Mat& m);

/// Largest singular value.
double spectral_norm(const Mat& m);

}  // namespace augpdg
