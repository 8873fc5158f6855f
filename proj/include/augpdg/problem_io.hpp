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

#include <filesystem>
#include <optional>
#include <string>

#include "augpdg/structured_problem.hpp"

namespace augpdg {

struct PrimalDual {
  Vec x;
  Vec lambda;
};

/// Contents of a problem file.
///
/// JSON layout (all matrices are arrays of rows):
///
///   {
///     "n": 2,
///     "objective": {"H": [[2,0],[0,2]], "c": [0,0], "r": 0},
///     "constraints": [
///       {"type": "quadratic", "A": [[2,0],[0,2]], "b": [0,0], "d": -1},
///       {"type": "affine", "a": [1,0], "beta": 0.5}
///     ],
///     "box": {"lo": [-2,-2], "hi": [2,2]},
///     "declared_constants": {"mu": 2, "l_smooth": 2,
///                            "constraints": [{"L": 2, "B": 5.7}, ...]},
///     "initial":   {"x": [...], "lambda": [...]},
///     "reference": {"x": [...], "lambda": [...]}
///   }
///
/// `declared_constants` (and each of its members), `initial` and
/// `reference` are optional.
struct ProblemFile {
  StructuredProblem problem;
  std::optional<PrimalDual> initial;
  std::optional<PrimalDual> reference;
};

/// Throws InputError. Syntax errors carry "source:line:column:".
ProblemFile parse_problem_text(const std::string& text,
                               const std::string& source = "<input>");
ProblemFile read_problem_file(const std::filesystem::path& path);

std::string problem_to_json(const StructuredProblem& problem,
                            const std::optional<PrimalDual>& reference =
                                std::nullopt);

}  // namespace augpdg
