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

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace augpdg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Malformed or inconsistent input (dimension mismatch, bad file, bad flag).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared while iterating.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// A rate certificate could not be assembled. `constant()` names the
/// quantity that failed its positivity (or rank) requirement.
class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& constant, const std::string& what)
      : std::runtime_error(what), constant_(constant) {}
  const std::string& constant() const { return constant_; }

 private:
  std::string constant_;
};

inline void require_size(const Vec& v, Index expected, const char* name) {
  if (v.size() != expected) {
    throw InputError(std::string(name) + ": expected length " +
                     std::to_string(expected) + ", got " +
                     std::to_string(v.size()));
  }
}

/// Stacked Euclidean norm sqrt(|a|^2 + |b|^2).
template <typename DerivedA, typename DerivedB>
double stacked_norm(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  return std::sqrt(a.squaredNorm() + b.squaredNorm());
}

/// Portable seeded generator: mt19937_64 bits mapped to doubles by hand so
/// that sample streams do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vec normal_vector(Index n);
  Vec unit_vector(Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer, used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace augpdg
