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

#ifndef MASKINFO_MASKING_H_
#define MASKINFO_MASKING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maskinfo/molgraph.h"
#include "maskinfo/motif.h"
#include "maskinfo/random.h"
#include "maskinfo/scoring.h"

namespace maskinfo {

// Sentinel atomic number carried by masked atoms in a corrupted graph.
inline constexpr int kMaskToken = 119;

// Masking distributions selectable from the command line. kPageRank and
// kExternal are both perturbed top-k over different score sources.
enum class MaskStrategy { kUniform, kPageRank, kExternal, kMoAMa, kMotifPred };

enum class PlanKind { kUniform, kPerturbedTopK, kMoAMa, kMotifPred };

std::string_view MaskStrategyName(MaskStrategy strategy);
std::optional<MaskStrategy> ParseMaskStrategy(std::string_view name);
std::string_view PlanKindName(PlanKind kind);
std::optional<PlanKind> ParsePlanKind(std::string_view name);
PlanKind PlanKindFor(MaskStrategy strategy);

struct MaskConfig {
  double ratio = 0.15;  // gamma
  int epoch = 1;        // i
  int max_epoch = 1;    // E
  double beta = 0.25;
  double intra_motif_fraction = 0.5;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless 0 < ratio <= 1, 1 <= epoch <= max_epoch,
  // beta >= 0 and 0 < intra_motif_fraction <= 1.
  void Validate() const;
};

// Perturbation strength used with each score source (0.25 for PageRank,
// 0.5 for learned/external scores).
double DefaultBeta(ScoreSource source);

// k(gamma, n) = max(1, round_half_up(gamma * n)), never more than n.
int MaskCount(double ratio, int n);

// gamma_i = gamma * sqrt(i / E).
double AnnealedRatio(const MaskConfig& config);

// Indices of the k largest values; ties go to the lower index. Result sorted
// ascending.
std::vector<int> TopK(std::span<const double> values, int k);

struct MaskPlan {
  std::vector<int> masked_atoms;   // sorted
  std::vector<int> masked_motifs;  // sorted; empty for node-level strategies
  PlanKind kind = PlanKind::kUniform;

  bool operator==(const MaskPlan&) const = default;
};

MaskPlan UniformMask(const MolGraph& graph, const MaskConfig& config, Rng& rng);

// Perturbed top-k: candidates are the top k(gamma_i) scores, every node gets
// U(0,1) noise, candidates get +beta, and the top k(gamma) noisy scores are
// masked.
MaskPlan PerturbedTopK(const NodeScores& scores, const MaskConfig& config, Rng& rng);

// Non-adjacent whole-motif selection. The first drawn motif is always taken;
// later draws stop before the masked-atom count would exceed k(gamma, |V|).
MaskPlan MoAMaMask(const MotifPartition& partition, std::span<const std::vector<int>> motif_adjacency,
                   const MaskConfig& config, Rng& rng);

// Motifs drawn without replacement until k(gamma, |V|) atoms are masked; each
// drawn motif has ceil(fraction * |motif|) of its atoms masked.
MaskPlan MotifPredMask(const MotifPartition& partition, const MaskConfig& config, Rng& rng);

// Everything one graph needs for any strategy. Pointers may be null when the
// chosen strategy does not use them.
struct MaskInputs {
  const MolGraph* graph = nullptr;
  const MotifPartition* partition = nullptr;
  const std::vector<std::vector<int>>* motif_adjacency = nullptr;
  const NodeScores* scores = nullptr;
};

MaskPlan DrawPlan(MaskStrategy strategy, const MaskInputs& inputs, const MaskConfig& config, Rng& rng);

// Corrupted graph: the original graph plus a mask marker per atom.
class MaskedGraph {
 public:
  explicit MaskedGraph(MolGraph graph);

  const MolGraph& graph() const { return graph_; }
  bool masked(int atom) const { return masked_[static_cast<size_t>(atom)]; }
  bool mask_token_applied() const { return applied_; }
  std::vector<int> masked_atoms() const;
  // Atomic numbers as seen by the encoder: kMaskToken on masked atoms.
  std::vector<int> AtomFeatures() const;

  bool operator==(const MaskedGraph& other) const;

 private:
  friend MaskedGraph ApplyMask(const MaskedGraph&, const MaskPlan&);
  MolGraph graph_;
  std::vector<bool> masked_;
  bool applied_ = false;
};

// Throws OutOfRangeIndex if the plan references atoms outside the graph.
MaskedGraph ApplyMask(const MolGraph& graph, const MaskPlan& plan);
MaskedGraph ApplyMask(const MaskedGraph& masked, const MaskPlan& plan);

}  // namespace maskinfo

#endif  // MASKINFO_MASKING_H_
