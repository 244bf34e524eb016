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

#include "maskinfo/masking.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maskinfo/error.h"

namespace maskinfo {

std::string_view MaskStrategyName(MaskStrategy strategy) {
  switch (strategy) {
    case MaskStrategy::kUniform: return "uniform";
    case MaskStrategy::kPageRank: return "pagerank";
    case MaskStrategy::kExternal: return "external";
    case MaskStrategy::kMoAMa: return "moama";
    case MaskStrategy::kMotifPred: return "motifpred";
  }
  return "unknown";
}

std::optional<MaskStrategy> ParseMaskStrategy(std::string_view name) {
  for (auto s : {MaskStrategy::kUniform, MaskStrategy::kPageRank, MaskStrategy::kExternal, MaskStrategy::kMoAMa,
                 MaskStrategy::kMotifPred}) {
    if (MaskStrategyName(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view PlanKindName(PlanKind kind) {
  switch (kind) {
    case PlanKind::kUniform: return "uniform";
    case PlanKind::kPerturbedTopK: return "perturbed_topk";
    case PlanKind::kMoAMa: return "moama";
    case PlanKind::kMotifPred: return "motifpred";
  }
  return "unknown";
}

std::optional<PlanKind> ParsePlanKind(std::string_view name) {
  for (auto k : {PlanKind::kUniform, PlanKind::kPerturbedTopK, PlanKind::kMoAMa, PlanKind::kMotifPred}) {
    if (PlanKindName(k) == name) return k;
  }
  return std::nullopt;
}

PlanKind PlanKindFor(MaskStrategy strategy) {
  switch (strategy) {
    case MaskStrategy::kUniform: return PlanKind::kUniform;
    case MaskStrategy::kPageRank:
    case MaskStrategy::kExternal: return PlanKind::kPerturbedTopK;
    case MaskStrategy::kMoAMa: return PlanKind::kMoAMa;
    case MaskStrategy::kMotifPred: return PlanKind::kMotifPred;
  }
  return PlanKind::kUniform;
}

void MaskConfig::Validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "mask ratio must lie in (0,1]");
  if (max_epoch < 1 || epoch < 1 || epoch > max_epoch) {
    throw Error(ErrorCode::kInvalidArgument, "epoch must satisfy 1 <= epoch <= max_epoch");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::kInvalidArgument, "beta must be >= 0");
  if (!(intra_motif_fraction > 0.0 && intra_motif_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "intra-motif fraction must lie in (0,1]");
  }
}

double DefaultBeta(ScoreSource source) { return source == ScoreSource::kExternal ? 0.5 : 0.25; }

int MaskCount(double ratio, int n) {
  if (n <= 0) return 0;
  // The epsilon absorbs products like 0.15 * 10 landing just below x.5.
  const int k = static_cast<int>(std::floor(ratio * n + 0.5 + 1e-9));
  return std::clamp(k, 1, n);
}

double AnnealedRatio(const MaskConfig& config) {
  if (config.epoch == config.max_epoch) return config.ratio;
  return config.ratio * std::sqrt(static_cast<double>(config.epoch) / static_cast<double>(config.max_epoch));
}

std::vector<int> TopK(std::span<const double> values, int k) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  k = std::clamp(k, 0, static_cast<int>(values.size()));
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    const double va = values[static_cast<size_t>(a)];
    const double vb = values[static_cast<size_t>(b)];
    if (va != vb) return va > vb;
    return a < b;
  });
  order.resize(static_cast<size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

// k distinct indices from [0, n), uniformly, via a partial Fisher-Yates shuffle.
std::vector<int> SampleWithoutReplacement(int n, int k, Rng& rng) {
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(pick(rng))]);
  }
  pool.resize(static_cast<size_t>(k));
  return pool;
}

}  // namespace

MaskPlan UniformMask(const MolGraph& graph, const MaskConfig& config, Rng& rng) {
  const int n = graph.num_atoms();
  MaskPlan plan;
  plan.kind = PlanKind::kUniform;
  plan.masked_atoms = SampleWithoutReplacement(n, MaskCount(config.ratio, n), rng);
  std::sort(plan.masked_atoms.begin(), plan.masked_atoms.end());
  return plan;
}

MaskPlan PerturbedTopK(const NodeScores& scores, const MaskConfig& config, Rng& rng) {
  const int n = static_cast<int>(scores.values.size());
  MaskPlan plan;
  plan.kind = PlanKind::kPerturbedTopK;
  if (n == 0) return plan;
  const std::vector<int> candidates = TopK(scores.values, MaskCount(AnnealedRatio(config), n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> noisy(static_cast<size_t>(n));
  for (auto& s : noisy) s = unit(rng);
  for (int c : candidates) noisy[static_cast<size_t>(c)] += config.beta;
  plan.masked_atoms = TopK(noisy, MaskCount(config.ratio, n));
  return plan;
}

MaskPlan MoAMaMask(const MotifPartition& partition, std::span<const std::vector<int>> motif_adjacency,
                   const MaskConfig& config, Rng& rng) {
  MaskPlan plan;
  plan.kind = PlanKind::kMoAMa;
  const int n = static_cast<int>(partition.motif_of_atom.size());
  const int budget = MaskCount(config.ratio, n);
  std::vector<int> pool(partition.motifs.size());
  std::iota(pool.begin(), pool.end(), 0);
  int masked = 0;
  while (!pool.empty()) {
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    const int motif = pool[pick(rng)];
    const int size = static_cast<int>(partition.motifs[static_cast<size_t>(motif)].size());
    if (!plan.masked_motifs.empty() && masked + size > budget) break;
    plan.masked_motifs.push_back(motif);
    masked += size;
    const auto& nbrs = motif_adjacency[static_cast<size_t>(motif)];
    std::erase_if(pool, [&](int m) { return m == motif || std::binary_search(nbrs.begin(), nbrs.end(), m); });
  }
  std::sort(plan.masked_motifs.begin(), plan.masked_motifs.end());
  for (int m : plan.masked_motifs) {
    const auto& atoms = partition.motifs[static_cast<size_t>(m)];
    plan.masked_atoms.insert(plan.masked_atoms.end(), atoms.begin(), atoms.end());
  }
  std::sort(plan.masked_atoms.begin(), plan.masked_atoms.end());
  return plan;
}

MaskPlan MotifPredMask(const MotifPartition& partition, const MaskConfig& config, Rng& rng) {
  MaskPlan plan;
  plan.kind = PlanKind::kMotifPred;
  const int n = static_cast<int>(partition.motif_of_atom.size());
  const int budget = MaskCount(config.ratio, n);
  const int motif_count = partition.size();
  const std::vector<int> order = SampleWithoutReplacement(motif_count, motif_count, rng);
  int masked = 0;
  for (int motif : order) {
    if (masked >= budget) break;
    const auto& atoms = partition.motifs[static_cast<size_t>(motif)];
    const int size = static_cast<int>(atoms.size());
    const int take = std::clamp(static_cast<int>(std::ceil(config.intra_motif_fraction * size - 1e-9)), 1, size);
    for (int local : SampleWithoutReplacement(size, take, rng)) plan.masked_atoms.push_back(atoms[static_cast<size_t>(local)]);
    plan.masked_motifs.push_back(motif);
    masked += take;
  }
  std::sort(plan.masked_atoms.begin(), plan.masked_atoms.end());
  std::sort(plan.masked_motifs.begin(), plan.masked_motifs.end());
  return plan;
}

MaskPlan DrawPlan(MaskStrategy strategy, const MaskInputs& inputs, const MaskConfig& config, Rng& rng) {
  switch (strategy) {
    case MaskStrategy::kUniform:
      return UniformMask(*inputs.graph, config, rng);
    case MaskStrategy::kPageRank:
    case MaskStrategy::kExternal:
      if (inputs.scores == nullptr) throw Error(ErrorCode::kInvalidArgument, "perturbed top-k needs node scores");
      return PerturbedTopK(*inputs.scores, config, rng);
    case MaskStrategy::kMoAMa:
      if (inputs.partition == nullptr || inputs.motif_adjacency == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "moama masking needs a motif partition and adjacency");
      }
      return MoAMaMask(*inputs.partition, *inputs.motif_adjacency, config, rng);
    case MaskStrategy::kMotifPred:
      if (inputs.partition == nullptr) throw Error(ErrorCode::kInvalidArgument, "motifpred masking needs a partition");
      return MotifPredMask(*inputs.partition, config, rng);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown masking strategy");
}

MaskedGraph::MaskedGraph(MolGraph graph) : graph_(std::move(graph)), masked_(static_cast<size_t>(graph_.num_atoms()), false) {}

std::vector<int> MaskedGraph::masked_atoms() const {
  std::vector<int> out;
  for (size_t a = 0; a < masked_.size(); ++a) {
    if (masked_[a]) out.push_back(static_cast<int>(a));
  }
  return out;
}

std::vector<int> MaskedGraph::AtomFeatures() const {
  std::vector<int> out;
  out.reserve(masked_.size());
  for (size_t a = 0; a < masked_.size(); ++a) {
    out.push_back(masked_[a] ? kMaskToken : graph_.atoms()[a].atomic_number);
  }
  return out;
}

bool MaskedGraph::operator==(const MaskedGraph& other) const {
  return applied_ == other.applied_ && masked_ == other.masked_ &&
         graph_.source_smiles() == other.graph_.source_smiles() && AtomFeatures() == other.AtomFeatures();
}

MaskedGraph ApplyMask(const MaskedGraph& masked, const MaskPlan& plan) {
  MaskedGraph out = masked;
  for (int a : plan.masked_atoms) {
    if (a < 0 || a >= out.graph_.num_atoms()) {
      throw Error(ErrorCode::kOutOfRangeIndex, "mask plan references atom " + std::to_string(a) + " of a " +
                                                   std::to_string(out.graph_.num_atoms()) + "-atom graph");
    }
    out.masked_[static_cast<size_t>(a)] = true;
  }
  out.applied_ = out.applied_ || !plan.masked_atoms.empty();
  return out;
}

MaskedGraph ApplyMask(const MolGraph& graph, const MaskPlan& plan) { return ApplyMask(MaskedGraph(graph), plan); }

}  // namespace maskinfo
