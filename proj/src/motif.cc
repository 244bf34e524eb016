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

#include "maskinfo/motif.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "maskinfo/error.h"

namespace maskinfo {

bool IsCuttableBond(const MolGraph& graph, int bond_index) {
  const Bond& bond = graph.bond(bond_index);
  if (bond.in_ring || bond.order != BondOrder::kSingle) return false;
  const Atom& a = graph.atom(bond.begin);
  const Atom& b = graph.atom(bond.end);
  if (a.in_ring || b.in_ring) return true;
  return graph.degree(bond.begin) >= 2 && graph.degree(bond.end) >= 2;
}

MotifPartition Decompose(const MolGraph& graph) {
  const int n = graph.num_atoms();
  std::vector<bool> cut(static_cast<size_t>(graph.num_bonds()));
  for (int b = 0; b < graph.num_bonds(); ++b) cut[static_cast<size_t>(b)] = IsCuttableBond(graph, b);

  MotifPartition partition;
  partition.motif_of_atom.assign(static_cast<size_t>(n), -1);
  for (int start = 0; start < n; ++start) {
    if (partition.motif_of_atom[static_cast<size_t>(start)] >= 0) continue;
    const int id = partition.size();
    std::vector<int> members = {start};
    partition.motif_of_atom[static_cast<size_t>(start)] = id;
    for (size_t head = 0; head < members.size(); ++head) {
      for (const Neighbor& nb : graph.neighbors(members[head])) {
        if (cut[static_cast<size_t>(nb.bond)]) continue;
        if (partition.motif_of_atom[static_cast<size_t>(nb.atom)] >= 0) continue;
        partition.motif_of_atom[static_cast<size_t>(nb.atom)] = id;
        members.push_back(nb.atom);
      }
    }
    std::sort(members.begin(), members.end());
    partition.motifs.push_back(std::move(members));
  }
  partition.signatures.reserve(partition.motifs.size());
  for (const auto& motif : partition.motifs) partition.signatures.push_back(CanonicalSignature(graph, motif));
  partition.vocab_ids.assign(partition.motifs.size(), std::nullopt);
  return partition;
}

std::vector<std::vector<int>> MotifAdjacency(const MolGraph& graph, const MotifPartition& partition) {
  std::vector<std::set<int>> sets(partition.motifs.size());
  for (const Bond& bond : graph.bonds()) {
    const int ma = partition.motif_of_atom[static_cast<size_t>(bond.begin)];
    const int mb = partition.motif_of_atom[static_cast<size_t>(bond.end)];
    if (ma != mb) {
      sets[static_cast<size_t>(ma)].insert(mb);
      sets[static_cast<size_t>(mb)].insert(ma);
    }
  }
  std::vector<std::vector<int>> adjacency;
  adjacency.reserve(sets.size());
  for (const auto& s : sets) adjacency.emplace_back(s.begin(), s.end());
  return adjacency;
}

// ---------------------------------------------------------------------------
// Canonical signatures: color refinement plus individualization search.

namespace {

struct LocalGraph {
  std::vector<std::string> atom_tokens;
  std::vector<std::vector<std::pair<int, char>>> adj;  // (neighbor, bond code)
};

using Colors = std::vector<int>;

// Re-ranks vertices by an arbitrary sortable key.
template <typename Key>
int RankBy(const std::vector<Key>& keys, Colors& colors) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<size_t>(a)] < keys[static_cast<size_t>(b)]; });
  int rank = -1;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || keys[static_cast<size_t>(order[i - 1])] < keys[static_cast<size_t>(order[i])]) ++rank;
    colors[static_cast<size_t>(order[i])] = rank;
  }
  return rank + 1;
}

int Refine(const LocalGraph& g, Colors& colors) {
  int classes = 1 + *std::max_element(colors.begin(), colors.end());
  using Key = std::pair<int, std::vector<std::pair<char, int>>>;
  std::vector<Key> keys(colors.size());
  while (true) {
    for (size_t v = 0; v < colors.size(); ++v) {
      keys[v].first = colors[v];
      auto& nbr = keys[v].second;
      nbr.clear();
      for (const auto& [u, code] : g.adj[v]) nbr.emplace_back(code, colors[static_cast<size_t>(u)]);
      std::sort(nbr.begin(), nbr.end());
    }
    const int next = RankBy(keys, colors);
    if (next == classes) return classes;
    classes = next;
  }
}

std::string LeafString(const LocalGraph& g, const Colors& colors) {
  const size_t m = colors.size();
  std::vector<int> at(m);
  for (size_t v = 0; v < m; ++v) at[static_cast<size_t>(colors[v])] = static_cast<int>(v);
  std::string out;
  for (size_t c = 0; c < m; ++c) {
    if (c) out += '.';
    out += g.atom_tokens[static_cast<size_t>(at[c])];
  }
  std::vector<std::tuple<int, int, char>> edges;
  for (size_t v = 0; v < m; ++v) {
    for (const auto& [u, code] : g.adj[v]) {
      const int a = colors[v];
      const int b = colors[static_cast<size_t>(u)];
      if (a < b) edges.emplace_back(a, b, code);
    }
  }
  std::sort(edges.begin(), edges.end());
  out += '|';
  for (size_t e = 0; e < edges.size(); ++e) {
    if (e) out += ',';
    out += std::to_string(std::get<0>(edges[e])) + '-' + std::to_string(std::get<1>(edges[e])) + std::get<2>(edges[e]);
  }
  return out;
}

// Invariant of the stable coloring; used only when the search budget runs out.
std::string QuotientString(const LocalGraph& g, const Colors& colors, int classes) {
  std::vector<std::string> token_of(static_cast<size_t>(classes));
  std::vector<int> size(static_cast<size_t>(classes), 0);
  for (size_t v = 0; v < colors.size(); ++v) {
    token_of[static_cast<size_t>(colors[v])] = g.atom_tokens[v];
    ++size[static_cast<size_t>(colors[v])];
  }
  std::map<std::tuple<int, int, char>, int> edge_counts;
  for (size_t v = 0; v < colors.size(); ++v) {
    for (const auto& [u, code] : g.adj[v]) {
      const int a = colors[v];
      const int b = colors[static_cast<size_t>(u)];
      if (a < b || (a == b && static_cast<int>(v) < u)) ++edge_counts[{a, b, code}];
    }
  }
  std::string out = "wl:";
  for (int c = 0; c < classes; ++c) {
    if (c) out += '.';
    out += token_of[static_cast<size_t>(c)] + 'x' + std::to_string(size[static_cast<size_t>(c)]);
  }
  out += '|';
  bool first = true;
  for (const auto& [key, count] : edge_counts) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(std::get<0>(key)) + '-' + std::to_string(std::get<1>(key)) + std::get<2>(key) + 'x' +
           std::to_string(count);
  }
  return out;
}

struct BudgetExceeded {};

class CanonicalSearch {
 public:
  CanonicalSearch(const LocalGraph& g, int max_leaves) : g_(g), max_leaves_(max_leaves) {}

  void Run(Colors colors) {
    const int classes = Refine(g_, colors);
    if (classes == static_cast<int>(colors.size())) {
      Consider(LeafString(g_, colors));
      return;
    }
    // Target cell: lowest color among non-singleton cells.
    std::vector<int> size(static_cast<size_t>(classes), 0);
    for (int c : colors) ++size[static_cast<size_t>(c)];
    int target = 0;
    while (size[static_cast<size_t>(target)] < 2) ++target;
    for (size_t v = 0; v < colors.size(); ++v) {
      if (colors[v] != target) continue;
      std::vector<std::pair<int, int>> keys(colors.size());
      for (size_t u = 0; u < colors.size(); ++u) keys[u] = {colors[u], u == v ? 0 : 1};
      Colors child(colors.size());
      RankBy(keys, child);
      Run(std::move(child));
    }
  }

  const std::string& best() const { return best_; }

 private:
  void Consider(std::string leaf) {
    if (++leaves_ > max_leaves_) throw BudgetExceeded{};
    if (best_.empty() || leaf < best_) best_ = std::move(leaf);
  }

  const LocalGraph& g_;
  int max_leaves_;
  int leaves_ = 0;
  std::string best_;
};

std::string AtomLabel(const Atom& atom) {
  std::string token = std::to_string(atom.atomic_number);
  if (atom.aromatic) token += 'a';
  return token;
}

}  // namespace

std::string CanonicalSignature(const MolGraph& graph, std::span<const int> atoms, const SignatureOptions& options) {
  if (atoms.empty()) throw Error(ErrorCode::kDisconnectedMotif, "empty atom set");
  std::unordered_map<int, int> local;
  local.reserve(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] < 0 || atoms[i] >= graph.num_atoms()) {
      throw Error(ErrorCode::kOutOfRangeIndex, "atom " + std::to_string(atoms[i]) + " not in graph");
    }
    local.emplace(atoms[i], static_cast<int>(i));
  }
  LocalGraph g;
  g.atom_tokens.resize(atoms.size());
  g.adj.resize(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    g.atom_tokens[i] = AtomLabel(graph.atom(atoms[i]));
    for (const Neighbor& nb : graph.neighbors(atoms[i])) {
      auto it = local.find(nb.atom);
      if (it != local.end()) g.adj[i].emplace_back(it->second, BondOrderCode(graph.bond(nb.bond).order));
    }
  }
  // Connectivity of the induced subgraph.
  std::vector<bool> seen(atoms.size(), false);
  std::vector<int> stack = {0};
  seen[0] = true;
  size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [u, code] : g.adj[static_cast<size_t>(v)]) {
      if (!seen[static_cast<size_t>(u)]) {
        seen[static_cast<size_t>(u)] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  if (reached != atoms.size()) throw Error(ErrorCode::kDisconnectedMotif, "atom set induces a disconnected subgraph");

  Colors colors(atoms.size());
  RankBy(g.atom_tokens, colors);
  CanonicalSearch search(g, options.max_search_leaves);
  try {
    search.Run(colors);
  } catch (const BudgetExceeded&) {
    const int classes = Refine(g, colors);
    return QuotientString(g, colors, classes);
  }
  return search.best();
}

std::string CanonicalSignature(const MolGraph& graph) {
  std::vector<int> all(static_cast<size_t>(graph.num_atoms()));
  std::iota(all.begin(), all.end(), 0);
  return CanonicalSignature(graph, all);
}

// ---------------------------------------------------------------------------
// Vocabulary.

void MotifVocab::Builder::Add(const MolGraph& graph) { Add(Decompose(graph)); }

void MotifVocab::Builder::Add(const MotifPartition& partition) {
  for (const auto& sig : partition.signatures) ++counts_[sig];
}

void MotifVocab::Builder::Merge(const Builder& other) {
  for (const auto& [sig, count] : other.counts_) counts_[sig] += count;
}

MotifVocab MotifVocab::Builder::Finish() const { return FromCounts(counts_); }

MotifVocab MotifVocab::Build(std::span<const MolGraph> corpus) {
  Builder builder;
  for (const auto& g : corpus) builder.Add(g);
  return builder.Finish();
}

MotifVocab MotifVocab::FromCounts(const std::map<std::string, std::int64_t>& counts) {
  std::vector<std::pair<std::string, std::int64_t>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  MotifVocab vocab;
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i].second < 1) throw Error(ErrorCode::kInvalidArgument, "motif count must be >= 1");
    vocab.entries_[items[i].first] = {static_cast<int>(i), items[i].second};
  }
  return vocab;
}

std::optional<int> MotifVocab::Find(const std::string& signature) const {
  auto it = entries_.find(signature);
  if (it == entries_.end()) return std::nullopt;
  return it->second.id;
}

std::vector<std::string> MotifVocab::SignaturesById() const {
  std::vector<std::string> out(entries_.size());
  for (const auto& [sig, entry] : entries_) out[static_cast<size_t>(entry.id)] = sig;
  return out;
}

void MotifVocab::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot open " + path + " for writing");
  out << "signature\tid\tcount\n";
  for (const auto& sig : SignaturesById()) {
    out << sig << '\t' << entries_.at(sig).id << '\t' << entries_.at(sig).count << '\n';
  }
  if (!out) throw Error(ErrorCode::kIOFailure, "write failed for " + path);
}

MotifVocab MotifVocab::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOFailure, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "signature\tid\tcount") {
    throw Error(ErrorCode::kIOFailure, path + ": expected header 'signature<TAB>id<TAB>count'");
  }
  MotifVocab vocab;
  std::vector<bool> seen_ids;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string sig, id_text, count_text;
    if (!std::getline(fields, sig, '\t') || !std::getline(fields, id_text, '\t') || !std::getline(fields, count_text)) {
      throw Error(ErrorCode::kIOFailure, path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    Entry entry;
    try {
      entry.id = std::stoi(id_text);
      entry.count = std::stoll(count_text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kIOFailure, path + ":" + std::to_string(line_no) + ": malformed id/count");
    }
    if (entry.id < 0 || entry.count < 1) {
      throw Error(ErrorCode::kIOFailure, path + ":" + std::to_string(line_no) + ": id must be >= 0 and count >= 1");
    }
    if (static_cast<size_t>(entry.id) >= seen_ids.size()) seen_ids.resize(static_cast<size_t>(entry.id) + 1, false);
    if (seen_ids[static_cast<size_t>(entry.id)] || !vocab.entries_.emplace(sig, entry).second) {
      throw Error(ErrorCode::kIOFailure, path + ":" + std::to_string(line_no) + ": duplicate id or signature");
    }
    seen_ids[static_cast<size_t>(entry.id)] = true;
  }
  if (seen_ids.size() != vocab.entries_.size()) throw Error(ErrorCode::kIOFailure, path + ": ids are not dense");
  return vocab;
}

bool MotifVocab::operator==(const MotifVocab& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (auto a = entries_.begin(), b = other.entries_.begin(); a != entries_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.id != b->second.id || a->second.count != b->second.count) return false;
  }
  return true;
}

void AssignVocabIds(MotifPartition& partition, const MotifVocab& vocab) {
  partition.vocab_ids.resize(partition.signatures.size());
  for (size_t m = 0; m < partition.signatures.size(); ++m) partition.vocab_ids[m] = vocab.Find(partition.signatures[m]);
}

// ---------------------------------------------------------------------------
// Coverage.

CoverageStats Coverage(const MotifVocab& pretrain_vocab, std::span<const MotifPartition> downstream) {
  CoverageStats stats;
  std::set<std::string> down_vocab;
  for (const auto& partition : downstream) {
    if (partition.signatures.empty()) continue;
    int seen = 0;
    for (const auto& sig : partition.signatures) {
      down_vocab.insert(sig);
      if (pretrain_vocab.Find(sig)) ++seen;
    }
    stats.per_graph_r.push_back(static_cast<double>(seen) / static_cast<double>(partition.signatures.size()));
  }
  stats.downstream_vocab_size = static_cast<int>(down_vocab.size());
  for (const auto& sig : down_vocab) {
    if (pretrain_vocab.Find(sig)) ++stats.intersection_size;
  }
  if (!down_vocab.empty()) {
    stats.overlap_ratio = static_cast<double>(stats.intersection_size) / static_cast<double>(down_vocab.size());
  }
  const auto& r = stats.per_graph_r;
  if (!r.empty()) {
    const double n = static_cast<double>(r.size());
    stats.mean_r = std::accumulate(r.begin(), r.end(), 0.0) / n;
    std::vector<double> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    const size_t mid = sorted.size() / 2;
    stats.median_r = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    const auto ge = std::count_if(r.begin(), r.end(), [](double x) { return x >= 0.8; });
    const auto le = std::count_if(r.begin(), r.end(), [](double x) { return x <= 0.2; });
    stats.pct_r_ge_080 = 100.0 * static_cast<double>(ge) / n;
    stats.pct_r_le_020 = 100.0 * static_cast<double>(le) / n;
  }
  return stats;
}

CoverageStats Coverage(const MotifVocab& pretrain_vocab, std::span<const MolGraph> downstream) {
  std::vector<MotifPartition> partitions;
  partitions.reserve(downstream.size());
  for (const auto& g : downstream) partitions.push_back(Decompose(g));
  return Coverage(pretrain_vocab, std::span<const MotifPartition>(partitions));
}

}  // namespace maskinfo
