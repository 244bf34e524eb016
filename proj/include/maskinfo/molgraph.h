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

#ifndef MASKINFO_MOLGRAPH_H_
#define MASKINFO_MOLGRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maskinfo {

// Atomic numbers run 1..118; 0 is the "unknown element" class.
inline constexpr int kMaxAtomicNumber = 118;

enum class BondOrder : std::uint8_t { kSingle = 1, kDouble = 2, kTriple = 3, kAromatic = 4 };

char BondOrderCode(BondOrder order);

struct Atom {
  int index = 0;
  int atomic_number = 0;
  bool aromatic = false;
  int formal_charge = 0;
  bool in_ring = false;
  // Hydrogen count written inside a bracket atom. Never materialized as nodes;
  // kept so the graph can be written back out.
  int bracket_hydrogens = 0;
  bool bracket = false;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;

  int Other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

struct RingFlags {
  std::vector<bool> atom;
  std::vector<bool> bond;
};

// Heavy-atom molecular graph. Immutable once built; all mutation happens in
// the builder functions of this module.
class MolGraph {
 public:
  MolGraph() = default;
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<size_t>(i)]; }
  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[static_cast<size_t>(atom)];
  }
  int degree(int atom) const { return static_cast<int>(adjacency_[static_cast<size_t>(atom)].size()); }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  const std::string& source_smiles() const { return source_smiles_; }

  // Single-atom molecules parse, but the analysis layer skips them.
  bool singleton() const { return atoms_.size() == 1; }

  // Bond index joining a and b, or -1.
  int FindBond(int a, int b) const;

  bool IsConnected() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::string source_smiles_;
};

// Bridge-based cycle detection: a bond is acyclic iff it is a bridge.
RingFlags RingMembership(const MolGraph& graph);

// Parses the supported SMILES subset. Throws Error with one of
// UnclosedRing, UnbalancedParen, UnknownToken, MultiFragment, EmptyInput.
MolGraph ParseSmiles(std::string_view smiles);

// Writes a SMILES string that parses back to an isomorphic graph.
std::string WriteSmiles(const MolGraph& graph);

// Keeps the dot-separated component with the most heavy atoms (first one on
// ties). Returns the input unchanged when it has no top-level dot.
std::string LargestFragment(std::string_view smiles);

// Element symbol for an atomic number ("*" for 0).
std::string_view ElementSymbol(int atomic_number);
// Atomic number for a symbol, 0 when the symbol is not an element.
int AtomicNumberFromSymbol(std::string_view symbol);

struct LabeledRecord {
  MolGraph graph;
  std::vector<std::optional<int>> task_labels;
  int active_task = 0;
  // 0-based data row in the source file.
  std::int64_t row = 0;

  std::optional<int> label() const {
    if (active_task < 0 || static_cast<size_t>(active_task) >= task_labels.size()) return std::nullopt;
    return task_labels[static_cast<size_t>(active_task)];
  }
};

}  // namespace maskinfo

#endif  // MASKINFO_MOLGRAPH_H_
