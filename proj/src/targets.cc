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

#include "maskinfo/targets.h"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "maskinfo/csv.h"
#include "maskinfo/error.h"

namespace maskinfo {

std::string_view TargetKindName(TargetKind kind) {
  switch (kind) {
    case TargetKind::kAtomType: return "atom_type";
    case TargetKind::kMotifLabel: return "motif_label";
    case TargetKind::kArgmaxToken: return "argmax_token";
    case TargetKind::kVqCode: return "vq_code";
  }
  return "unknown";
}

std::optional<TargetKind> ParseTargetKind(std::string_view name) {
  for (auto k : {TargetKind::kAtomType, TargetKind::kMotifLabel, TargetKind::kArgmaxToken, TargetKind::kVqCode}) {
    if (TargetKindName(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

// Splits a CSV line of plain numbers. Returns nullopt if any cell is not a
// number (used to detect header lines).
std::optional<std::vector<double>> ParseNumbers(const std::string& line) {
  std::vector<double> out;
  std::istringstream fields(line);
  std::string cell;
  while (std::getline(fields, cell, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(cell, &used);
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) return std::nullopt;
      out.push_back(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return out;
}

std::vector<std::string> Lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

Matrix ParseCodebook(std::string_view text) {
  Matrix m;
  const auto lines = Lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    auto values = ParseNumbers(lines[i]);
    if (!values) {
      if (i == 0) continue;  // header
      throw Error(ErrorCode::kShapeMismatch, "codebook row " + std::to_string(i) + " is not numeric");
    }
    if (m.cols == 0) m.cols = static_cast<int>(values->size());
    if (static_cast<int>(values->size()) != m.cols) {
      throw Error(ErrorCode::kDimMismatch, "codebook row " + std::to_string(i) + " has " +
                                               std::to_string(values->size()) + " columns, expected " +
                                               std::to_string(m.cols));
    }
    m.data.insert(m.data.end(), values->begin(), values->end());
    ++m.rows;
  }
  if (m.rows == 0) throw Error(ErrorCode::kShapeMismatch, "codebook is empty");
  return m;
}

Matrix LoadCodebook(const std::string& path) { return ParseCodebook(ReadFile(path)); }

void EmbeddingTable::Set(std::int64_t graph, int atom, std::vector<double> vec) {
  if (dim_ < 0) dim_ = static_cast<int>(vec.size());
  if (static_cast<int>(vec.size()) != dim_) {
    throw Error(ErrorCode::kDimMismatch, "embedding for graph " + std::to_string(graph) + " atom " +
                                             std::to_string(atom) + " has dimension " + std::to_string(vec.size()) +
                                             ", expected " + std::to_string(dim_));
  }
  rows_[graph][atom] = std::move(vec);
}

Matrix EmbeddingTable::ForGraph(std::int64_t graph, int atom_count) const {
  auto it = rows_.find(graph);
  if (it == rows_.end()) throw Error(ErrorCode::kShapeMismatch, "no embeddings for graph " + std::to_string(graph));
  const auto& atoms = it->second;
  if (static_cast<int>(atoms.size()) != atom_count || (atom_count > 0 && atoms.rbegin()->first != atom_count - 1) ||
      (atom_count > 0 && atoms.begin()->first != 0)) {
    throw Error(ErrorCode::kShapeMismatch, "graph " + std::to_string(graph) + " has " + std::to_string(atoms.size()) +
                                               " embedding rows for " + std::to_string(atom_count) + " atoms");
  }
  Matrix m;
  m.rows = atom_count;
  m.cols = dim_;
  m.data.reserve(static_cast<size_t>(atom_count) * static_cast<size_t>(std::max(dim_, 0)));
  for (const auto& [atom, vec] : atoms) m.data.insert(m.data.end(), vec.begin(), vec.end());
  return m;
}

EmbeddingTable ParseEmbeddings(std::string_view text) {
  EmbeddingTable table;
  const auto lines = Lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    auto values = ParseNumbers(lines[i]);
    if (!values) {
      if (i == 0) continue;
      throw Error(ErrorCode::kShapeMismatch, "embedding row " + std::to_string(i) + " is not numeric");
    }
    if (values->size() < 3) throw Error(ErrorCode::kShapeMismatch, "embedding row needs graph, atom and >= 1 value");
    const auto graph = static_cast<std::int64_t>((*values)[0]);
    const auto atom = static_cast<int>((*values)[1]);
    table.Set(graph, atom, std::vector<double>(values->begin() + 2, values->end()));
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string& path) { return ParseEmbeddings(ReadFile(path)); }

TargetAssignment AtomTypeTargets(const MolGraph& graph, const MaskPlan& plan) {
  TargetAssignment out;
  out.label_space_size = kAtomTypeSpace;
  for (int a : plan.masked_atoms) {
    if (a < 0 || a >= graph.num_atoms()) throw Error(ErrorCode::kOutOfRangeIndex, "atom " + std::to_string(a));
    out.unit_ids.push_back(a);
    out.labels.push_back(graph.atom(a).atomic_number);
  }
  return out;
}

TargetAssignment MotifTargets(const MotifPartition& partition, const MaskPlan& plan, const MotifVocab& vocab) {
  TargetAssignment out;
  out.label_space_size = vocab.size() + 1;
  const int unk = vocab.size();
  for (int m : plan.masked_motifs) {
    if (m < 0 || m >= partition.size()) throw Error(ErrorCode::kOutOfRangeIndex, "motif " + std::to_string(m));
    const auto id = vocab.Find(partition.signatures[static_cast<size_t>(m)]);
    out.unit_ids.push_back(m);
    out.labels.push_back(id.value_or(unk));
    if (!id) ++out.unknown_count;
  }
  return out;
}

int NearestCode(std::span<const double> embedding, const Matrix& codebook, bool l2_normalize) {
  if (static_cast<int>(embedding.size()) != codebook.cols) {
    throw Error(ErrorCode::kDimMismatch, "embedding dimension " + std::to_string(embedding.size()) +
                                             " != codebook dimension " + std::to_string(codebook.cols));
  }
  std::vector<double> e(embedding.begin(), embedding.end());
  if (l2_normalize) {
    double norm = 0.0;
    for (double v : e) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : e) v /= norm;
    }
  }
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int r = 0; r < codebook.rows; ++r) {
    const auto row = codebook.row(r);
    double d = 0.0;
    for (size_t j = 0; j < e.size(); ++j) {
      const double diff = e[j] - row[j];
      d += diff * diff;
    }
    if (d < best_dist) {
      best_dist = d;
      best = r;
    }
  }
  return best;
}

int ArgmaxIndex(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::kShapeMismatch, "empty logits");
  int best = 0;
  for (size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[static_cast<size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

TargetAssignment VqTargets(const MaskPlan& plan, const Matrix& embeddings, const Matrix& codebook, bool l2_normalize) {
  if (embeddings.cols != codebook.cols) {
    throw Error(ErrorCode::kDimMismatch, "embedding dimension " + std::to_string(embeddings.cols) +
                                             " != codebook dimension " + std::to_string(codebook.cols));
  }
  TargetAssignment out;
  out.label_space_size = codebook.rows;
  for (int a : plan.masked_atoms) {
    if (a < 0 || a >= embeddings.rows) throw Error(ErrorCode::kOutOfRangeIndex, "no embedding for atom " + std::to_string(a));
    out.unit_ids.push_back(a);
    out.labels.push_back(NearestCode(embeddings.row(a), codebook, l2_normalize));
  }
  return out;
}

TargetAssignment ArgmaxTargets(const MaskPlan& plan, const Matrix& logits, int token_space) {
  if (token_space > 0 && logits.cols != token_space) {
    throw Error(ErrorCode::kShapeMismatch, "logit rows have length " + std::to_string(logits.cols) +
                                               ", token space is " + std::to_string(token_space));
  }
  TargetAssignment out;
  out.label_space_size = logits.cols;
  for (int a : plan.masked_atoms) {
    if (a < 0 || a >= logits.rows) throw Error(ErrorCode::kShapeMismatch, "no logits for atom " + std::to_string(a));
    out.unit_ids.push_back(a);
    out.labels.push_back(ArgmaxIndex(logits.row(a)));
  }
  return out;
}

}  // namespace maskinfo
