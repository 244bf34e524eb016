/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "maskinfo/scoring.h"

#include <cmath>
#include <cctype>
#include <stdexcept>
#include <sstream>

#include "maskinfo/csv.h"
#include "maskinfo/error.h"

namespace maskinfo {

std::string_view ScoreSourceName(ScoreSource source) {
  switch (source) {
    case ScoreSource::kPageRank: return "pagerank";
    case ScoreSource::kDegree: return "degree";
    case ScoreSource::kExternal: return "external";
  }
  return "unknown";
}

NodeScores PageRank(const MolGraph& graph, const PageRankOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pagerank damping must lie in (0,1)");
  }
  const int n = graph.num_atoms();
  NodeScores scores;
  scores.source = ScoreSource::kPageRank;
  if (n == 0) return scores;
  const double teleport = (1.0 - options.alpha) / n;
  std::vector<double> x(static_cast<size_t>(n), 1.0 / n), next(static_cast<size_t>(n));
  scores.converged = false;
  for (int it = 1; it <= options.max_iter; ++it) {
    std::fill(next.begin(), next.end(), teleport);
    for (int u = 0; u < n; ++u) {
      const int deg = graph.degree(u);
      if (deg == 0) {
        // Only a single-atom graph has an isolated node; it keeps its mass.
        next[static_cast<size_t>(u)] += options.alpha * x[static_cast<size_t>(u)];
        continue;
      }
      const double share = options.alpha * x[static_cast<size_t>(u)] / deg;
      for (const Neighbor& nb : graph.neighbors(u)) next[static_cast<size_t>(nb.atom)] += share;
    }
    double delta = 0.0;
    for (int v = 0; v < n; ++v) delta += std::abs(next[static_cast<size_t>(v)] - x[static_cast<size_t>(v)]);
    x.swap(next);
    scores.iterations = it;
    if (delta < options.tol) {
      scores.converged = true;
      break;
    }
  }
  double total = 0.0;
  for (double v : x) total += v;
  for (double& v : x) v /= total;
  scores.values = std::move(x);
  return scores;
}

NodeScores DegreeScores(const MolGraph& graph) {
  NodeScores scores;
  scores.source = ScoreSource::kDegree;
  scores.values.reserve(static_cast<size_t>(graph.num_atoms()));
  for (int a = 0; a < graph.num_atoms(); ++a) scores.values.push_back(static_cast<double>(graph.degree(a)));
  return scores;
}

std::vector<NodeScores> ParseExternalScores(std::string_view text, const std::vector<int>& atom_counts) {
  std::vector<NodeScores> out;
  out.reserve(atom_counts.size());
  std::istringstream in{std::string(text)};
  std::string line;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row >= atom_counts.size()) {
      throw Error(ErrorCode::kShapeMismatch, "score file has more rows than the corpus (" +
                                                 std::to_string(atom_counts.size()) + " graphs)");
    }
    NodeScores scores;
    scores.source = ScoreSource::kExternal;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      double v = 0.0;
      try {
        size_t used = 0;
        v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::out_of_range&) {
        throw Error(ErrorCode::kNonFiniteScore, "row " + std::to_string(row) + ": '" + cell + "' out of range");
      } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::kShapeMismatch, "row " + std::to_string(row) + ": '" + cell + "' is not a number");
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteScore, "row " + std::to_string(row) + ": non-finite score '" + cell + "'");
      }
      scores.values.push_back(v);
    }
    if (static_cast<int>(scores.values.size()) != atom_counts[row]) {
      throw Error(ErrorCode::kShapeMismatch, "row " + std::to_string(row) + " has " +
                                                 std::to_string(scores.values.size()) + " scores, graph has " +
                                                 std::to_string(atom_counts[row]) + " atoms");
    }
    out.push_back(std::move(scores));
    ++row;
  }
  if (row != atom_counts.size()) {
    throw Error(ErrorCode::kShapeMismatch, "score file has " + std::to_string(row) + " rows, corpus has " +
                                               std::to_string(atom_counts.size()) + " graphs");
  }
  return out;
}

std::vector<NodeScores> LoadExternalScores(const std::string& path, const std::vector<int>& atom_counts) {
  return ParseExternalScores(ReadFile(path), atom_counts);
}

}  // namespace maskinfo
