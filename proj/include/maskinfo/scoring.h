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

#ifndef MASKINFO_SCORING_H_
#define MASKINFO_SCORING_H_

#include <string>
#include <string_view>
#include <vector>

#include "maskinfo/molgraph.h"

namespace maskinfo {

enum class ScoreSource { kPageRank, kDegree, kExternal };

std::string_view ScoreSourceName(ScoreSource source);

// Per-atom node importance consumed by perturbed top-k masking.
struct NodeScores {
  std::vector<double> values;
  ScoreSource source = ScoreSource::kExternal;
  // PageRank only: power iterations performed and whether the L1 change
  // dropped below tolerance before max_iter.
  int iterations = 0;
  bool converged = true;
};

struct PageRankOptions {
  double alpha = 0.85;
  double tol = 1e-8;
  int max_iter = 200;
};

// Power iteration x <- alpha * x D^-1 A + (1 - alpha) p with a uniform
// teleport p, x a row vector. Each step costs O(|E|). On NoConvergence the
// last iterate is returned with converged == false.
NodeScores PageRank(const MolGraph& graph, const PageRankOptions& options = {});

NodeScores DegreeScores(const MolGraph& graph);

// One CSV row per graph, comma-separated per-atom floats. `atom_counts` holds
// the expected row lengths in corpus order. Throws ShapeMismatch or
// NonFiniteScore (IOFailure when the file cannot be read).
std::vector<NodeScores> LoadExternalScores(const std::string& path, const std::vector<int>& atom_counts);
std::vector<NodeScores> ParseExternalScores(std::string_view text, const std::vector<int>& atom_counts);

}  // namespace maskinfo

#endif  // MASKINFO_SCORING_H_
