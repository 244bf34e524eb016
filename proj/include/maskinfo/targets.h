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

#ifndef MASKINFO_TARGETS_H_
#define MASKINFO_TARGETS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maskinfo/masking.h"
#include "maskinfo/motif.h"
#include "maskinfo/molgraph.h"

namespace maskinfo {

enum class TargetKind { kAtomType, kMotifLabel, kArgmaxToken, kVqCode };

std::string_view TargetKindName(TargetKind kind);
std::optional<TargetKind> ParseTargetKind(std::string_view name);

// Label space of atom-type targets: atomic numbers 0..118.
inline constexpr int kAtomTypeSpace = kMaxAtomicNumber + 1;

// Row-major dense matrix of floats read from CSV.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  std::span<const double> row(int r) const {
    return {data.data() + static_cast<size_t>(r) * static_cast<size_t>(cols), static_cast<size_t>(cols)};
  }
};

// Per-atom vectors for every graph in a corpus, keyed by graph index.
class EmbeddingTable {
 public:
  void Set(std::int64_t graph, int atom, std::vector<double> vec);
  // Rows for one graph, ordered by atom index. Throws ShapeMismatch if the
  // graph has no rows or atom indices are not exactly 0..n-1.
  Matrix ForGraph(std::int64_t graph, int atom_count) const;
  int dim() const { return dim_; }
  bool empty() const { return rows_.empty(); }

 private:
  std::map<std::int64_t, std::map<int, std::vector<double>>> rows_;
  int dim_ = -1;
};

// Codebook CSV: one code vector per row.
Matrix LoadCodebook(const std::string& path);
Matrix ParseCodebook(std::string_view text);
// Embedding CSV: graph_index,atom_index,v0,v1,... A header line is allowed.
EmbeddingTable LoadEmbeddings(const std::string& path);
EmbeddingTable ParseEmbeddings(std::string_view text);

struct TargetAssignment {
  std::vector<int> unit_ids;  // masked atom or motif indices
  std::vector<int> labels;
  int label_space_size = 0;
  // Motif targets only: units whose signature is missing from the vocab.
  // They carry the reserved UNK label (== vocab size).
  int unknown_count = 0;
};

TargetAssignment AtomTypeTargets(const MolGraph& graph, const MaskPlan& plan);

// One label per masked motif in motif-index order. Unknown signatures map to
// UNK = vocab.size(); label space is vocab.size() + 1.
TargetAssignment MotifTargets(const MotifPartition& partition, const MaskPlan& plan, const MotifVocab& vocab);

// Euclidean nearest codebook row per masked atom, ties to the lower index.
// `embeddings` holds one row per atom of the graph. Throws DimMismatch.
TargetAssignment VqTargets(const MaskPlan& plan, const Matrix& embeddings, const Matrix& codebook,
                           bool l2_normalize = false);

// Arg max of each masked atom's logits, ties to the lower index. Throws
// ShapeMismatch when a masked atom has no logits row, or when token_space > 0
// and the rows have a different length.
TargetAssignment ArgmaxTargets(const MaskPlan& plan, const Matrix& logits, int token_space = 0);

// Single-unit helpers used by the exact analysis paths.
int NearestCode(std::span<const double> embedding, const Matrix& codebook, bool l2_normalize = false);
int ArgmaxIndex(std::span<const double> logits);

}  // namespace maskinfo

#endif  // MASKINFO_TARGETS_H_
