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

#include "augpdg/problem_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace augpdg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& path,
                       const std::string& msg) {
  throw InputError(source + ": " + path + ": " + msg);
}

const json& field(const json& obj, const char* key, const std::string& source,
                  const std::string& path) {
  if (!obj.is_object()) fail(source, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& source, const std::string& path) {
  if (!j.is_number()) fail(source, path, "expected a number");
  return j.get<double>();
}

Vec vector(const json& j, const std::string& source, const std::string& path,
           Index expected = -1) {
  if (!j.is_array()) fail(source, path, "expected an array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = number(j[i], source, path + "[" + std::to_string(i) + "]");
  }
  if (expected >= 0 && v.size() != expected) {
    fail(source, path, "expected length " + std::to_string(expected) + ", got " +
                           std::to_string(v.size()));
  }
  return v;
}

Mat matrix(const json& j, const std::string& source, const std::string& path,
           Index n) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) {
    fail(source, path, "expected " + std::to_string(n) + " rows");
  }
  Mat M(n, n);
  for (Index i = 0; i < n; ++i) {
    M.row(i) = vector(j[static_cast<std::size_t>(i)], source,
                      path + "[" + std::to_string(i) + "]", n)
                   .transpose();
  }
  return M;
}

std::optional<PrimalDual> primal_dual(const json& root, const char* key,
                                      const std::string& source, Index n,
                                      Index m) {
  auto it = root.find(key);
  if (it == root.end()) return std::nullopt;
  const std::string path = key;
  return PrimalDual{vector(field(*it, "x", source, path), source, path + ".x", n),
                    vector(field(*it, "lambda", source, path), source,
                           path + ".lambda", m)};
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Mat& M) {
  json out = json::array();
  for (Index i = 0; i < M.rows(); ++i) out.push_back(to_json(Vec(M.row(i).transpose())));
  return out;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // The parser reports the 1-based byte just past the offending token.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw InputError(source + ":" + line_column(text, byte) + ": " + e.what());
  }
  if (!root.is_object()) fail(source, "<root>", "expected an object");

  const json& jn = field(root, "n", source, "<root>");
  if (!jn.is_number_integer() || jn.get<long long>() < 1) {
    fail(source, "n", "expected a positive integer");
  }
  const Index n = jn.get<Index>();

  const json& obj = field(root, "objective", source, "<root>");
  Mat H = matrix(field(obj, "H", source, "objective"), source, "objective.H", n);
  Vec c = vector(field(obj, "c", source, "objective"), source, "objective.c", n);
  double r = 0.0;
  if (obj.contains("r")) r = number(obj["r"], source, "objective.r");

  const json& jcons = field(root, "constraints", source, "<root>");
  if (!jcons.is_array() || jcons.empty()) {
    fail(source, "constraints", "expected a nonempty array");
  }
  std::vector<StructuredConstraint> cons;
  for (std::size_t i = 0; i < jcons.size(); ++i) {
    const std::string path = "constraints[" + std::to_string(i) + "]";
    const json& jc = jcons[i];
    const json& type = field(jc, "type", source, path);
    if (type == "quadratic") {
      cons.emplace_back(QuadraticConstraint{
          matrix(field(jc, "A", source, path), source, path + ".A", n),
          vector(field(jc, "b", source, path), source, path + ".b", n),
          jc.contains("d") ? number(jc["d"], source, path + ".d") : 0.0});
    } else if (type == "affine") {
      cons.emplace_back(AffineConstraint{
          vector(field(jc, "a", source, path), source, path + ".a", n),
          jc.contains("beta") ? number(jc["beta"], source, path + ".beta") : 0.0});
    } else {
      fail(source, path + ".type", "expected \"quadratic\" or \"affine\"");
    }
  }
  const Index m = static_cast<Index>(cons.size());

  const json& jbox = field(root, "box", source, "<root>");
  Box box{vector(field(jbox, "lo", source, "box"), source, "box.lo", n),
          vector(field(jbox, "hi", source, "box"), source, "box.hi", n)};

  std::optional<DeclaredConstants> declared;
  if (auto it = root.find("declared_constants"); it != root.end()) {
    DeclaredConstants d;
    const std::string path = "declared_constants";
    if (it->contains("mu")) d.mu = number((*it)["mu"], source, path + ".mu");
    if (it->contains("l_smooth")) {
      d.l_smooth = number((*it)["l_smooth"], source, path + ".l_smooth");
    }
    if (it->contains("constraints")) {
      const json& jd = (*it)["constraints"];
      if (!jd.is_array() || static_cast<Index>(jd.size()) != m) {
        fail(source, path + ".constraints", "expected one entry per constraint");
      }
      for (std::size_t i = 0; i < jd.size(); ++i) {
        const std::string p = path + ".constraints[" + std::to_string(i) + "]";
        d.constraints.push_back({number(field(jd[i], "L", source, p), source, p + ".L"),
                                 number(field(jd[i], "B", source, p), source, p + ".B")});
      }
    }
    declared = std::move(d);
  }

  auto initial = primal_dual(root, "initial", source, n, m);
  auto reference = primal_dual(root, "reference", source, n, m);

  try {
    return ProblemFile{StructuredProblem(std::move(H), std::move(c), r,
                                         std::move(cons), std::move(box),
                                         std::move(declared)),
                       std::move(initial), std::move(reference)};
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

ProblemFile read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str(), path.string());
}

std::string problem_to_json(const StructuredProblem& problem,
                            const std::optional<PrimalDual>& reference) {
  json root;
  root["n"] = problem.n();
  root["objective"] = {{"H", to_json(problem.H())},
                       {"c", to_json(problem.c())},
                       {"r", problem.r()}};
  json cons = json::array();
  for (const auto& con : problem.constraints()) {
    if (const auto* q = std::get_if<QuadraticConstraint>(&con)) {
      cons.push_back({{"type", "quadratic"},
                      {"A", to_json(q->A)},
                      {"b", to_json(q->b)},
                      {"d", q->d}});
    } else {
      const auto& a = std::get<AffineConstraint>(con);
      cons.push_back({{"type", "affine"}, {"a", to_json(a.a)}, {"beta", a.beta}});
    }
  }
  root["constraints"] = std::move(cons);
  root["box"] = {{"lo", to_json(problem.box().lo)}, {"hi", to_json(problem.box().hi)}};
  if (const auto& d = problem.declared()) {
    json jd = json::object();
    if (d->mu) jd["mu"] = *d->mu;
    if (d->l_smooth) jd["l_smooth"] = *d->l_smooth;
    if (!d->constraints.empty()) {
      json jc = json::array();
      for (const auto& s : d->constraints) {
        jc.push_back({{"L", s.lipschitz}, {"B", s.grad_bound}});
      }
      jd["constraints"] = std::move(jc);
    }
    root["declared_constants"] = std::move(jd);
  }
  if (reference) {
    root["reference"] = {{"x", to_json(reference->x)},
                         {"lambda", to_json(reference->lambda)}};
  }
  return root.dump(2) + "\n";
}

}  // namespace augpdg
