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

#ifndef MASKINFO_MOTIF_H_
#define MASKINFO_MOTIF_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maskinfo/molgraph.h"

namespace maskinfo {

// Disjoint cover of a graph's atoms by connected motifs.
struct MotifPartition {
  std::vector<std::vector<int>> motifs;  // each sorted ascending; ordered by first atom
  std::vector<int> motif_of_atom;
  std::vector<std::string> signatures;
  std::vector<std::optional<int>> vocab_ids;

  int size() const { return static_cast<int>(motifs.size()); }
};

// Cut rule: an acyclic single bond is cut when one endpoint is a ring atom,
// or when both endpoints have degree >= 2.
bool IsCuttableBond(const MolGraph& graph, int bond);

MotifPartition Decompose(const MolGraph& graph);

// Motif-level adjacency: two motifs are adjacent iff a cut bond joins them.
// Neighbor lists are sorted and duplicate-free.
std::vector<std::vector<int>> MotifAdjacency(const MolGraph& graph, const MotifPartition& partition);

struct SignatureOptions {
  // Leaves of the individualization search explored before falling back to
  // the refined-class invariant.
  int max_search_leaves = 4096;
};

// Isomorphism-invariant string for the subgraph induced by `atoms`, using
// atomic number, aromatic flag and bond order. Throws DisconnectedMotif if
// the atoms do not induce a connected subgraph.
std::string CanonicalSignature(const MolGraph& graph, std::span<const int> atoms,
                               const SignatureOptions& options = {});
std::string CanonicalSignature(const MolGraph& graph);

class MotifVocab {
 public:
  struct Entry {
    int id = 0;
    std::int64_t count = 0;
  };

  // Accumulates signature counts; builders merge commutatively so the final
  // vocabulary does not depend on how the corpus was partitioned.
  class Builder {
   public:
    void Add(const MolGraph& graph);
    void Add(const MotifPartition& partition);
    void Merge(const Builder& other);
    MotifVocab Finish() const;

   private:
    std::map<std::string, std::int64_t> counts_;
  };

  static MotifVocab Build(std::span<const MolGraph> corpus);
  // Ids by descending count, ties by signature.
  static MotifVocab FromCounts(const std::map<std::string, std::int64_t>& counts);

  std::optional<int> Find(const std::string& signature) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  // Signatures ordered by id.
  std::vector<std::string> SignaturesById() const;

  // TSV with header "signature\tid\tcount", rows in id order.
  void Save(const std::string& path) const;
  static MotifVocab Load(const std::string& path);

  bool operator==(const MotifVocab& other) const;

 private:
  std::map<std::string, Entry> entries_;
};

void AssignVocabIds(MotifPartition& partition, const MotifVocab& vocab);

struct CoverageStats {
  double overlap_ratio = 0.0;
  std::vector<double> per_graph_r;
  double mean_r = 0.0;
  double median_r = 0.0;
  double pct_r_ge_080 = 0.0;
  double pct_r_le_020 = 0.0;
  int downstream_vocab_size = 0;
  int intersection_size = 0;
};

CoverageStats Coverage(const MotifVocab& pretrain_vocab, std::span<const MolGraph> downstream);
// Same, over precomputed partitions.
CoverageStats Coverage(const MotifVocab& pretrain_vocab, std::span<const MotifPartition> downstream);

}  // namespace maskinfo

#endif  // MASKINFO_MOTIF_H_
