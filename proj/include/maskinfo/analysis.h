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

#ifndef MASKINFO_ANALYSIS_H_
#define MASKINFO_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maskinfo/dataset.h"
#include "maskinfo/infotheory.h"
#include "maskinfo/masking.h"
#include "maskinfo/motif.h"
#include "maskinfo/report.h"
#include "maskinfo/scoring.h"
#include "maskinfo/targets.h"

namespace maskinfo {

// Files backing the targets that are not derivable from the graph alone.
struct TargetResources {
  std::string vocab_path;  // motif_label; empty builds the vocab from the analysed corpus
  std::string codebook_path;
  std::string embeddings_path;  // vq_code: rows keyed by (source data row, atom)
  std::string logits_path;      // argmax_token: same layout as embeddings
  bool l2_normalize = false;
};

struct RunConfig {
  std::vector<DatasetManifest> datasets;
  IngestOptions ingest;
  std::vector<TargetKind> targets = {TargetKind::kAtomType, TargetKind::kMotifLabel};
  std::vector<MaskStrategy> strategies = {MaskStrategy::kUniform, MaskStrategy::kPageRank, MaskStrategy::kExternal};
  MaskConfig mask;
  std::optional<double> beta;  // unset: the score source's default
  // One per dataset, one row per parsed record in corpus order.
  std::vector<std::string> external_scores;
  TargetResources resources;
  PageRankOptions pagerank;
  std::vector<double> taus = DefaultTauGrid();
  int repeats = 5;
  bool without_replacement = false;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir;

  // Stable text of every setting that can change results; workers and
  // out_dir are left out.
  std::string Canonical() const;
  std::string Hash() const;
  Provenance MakeProvenance() const;
};

// A corpus ready for analysis: the labeled, non-singleton records and, when
// requested, their motif partitions with vocabulary ids assigned.
struct PreparedDataset {
  Corpus corpus;
  std::vector<int> analysed;  // indices into corpus.records
  std::vector<MotifPartition> partitions;  // parallel to `analysed`, may be empty
  MotifVocab vocab;

  const LabeledRecord& record(size_t i) const { return corpus.records[static_cast<size_t>(analysed[i])]; }
  int label(size_t i) const { return *record(i).label(); }
};

PreparedDataset Prepare(Corpus corpus, bool with_motifs, const RunConfig& config);
PreparedDataset Prepare(const DatasetManifest& manifest, bool with_motifs, const RunConfig& config);

// Every (local label, graph label) pair of a target: one per atom, or one per
// motif with a known vocabulary id.
std::vector<LabelPair> CollectPairs(const PreparedDataset& data, TargetKind target, const RunConfig& config);

// Exact MI, H(Y) and relative gain per dataset and target.
AnalysisReport RunMiAnalysis(const RunConfig& config);
AnalysisReport RunJsdAnalysis(const RunConfig& config);
// Sampled atom-type MI per dataset and strategy, plus the exact reference row.
AnalysisReport RunMaskSim(const RunConfig& config);
// Exact and shuffled-X MI per dataset and target.
AnalysisReport RunShuffleControl(const RunConfig& config);

std::string SummaryLine(const Corpus& corpus);

}  // namespace maskinfo

#endif  // MASKINFO_ANALYSIS_H_
