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

#include "maskinfo/dataset.h"

#include <algorithm>
#include <filesystem>

#include "maskinfo/csv.h"
#include "maskinfo/error.h"

namespace maskinfo {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int ColumnIndex(const CsvRow& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::kMissingColumn, "column '" + name + "' not found");
  return static_cast<int>(it - header.begin());
}

}  // namespace

LabelCell ParseLabelCell(std::string_view cell) {
  cell = Trim(cell);
  if (cell.empty()) return LabelCell::kMissing;
  if (cell == "1" || cell == "1.0") return LabelCell::kOne;
  if (cell == "0" || cell == "0.0") return LabelCell::kZero;
  return LabelCell::kInvalid;
}

std::string DefaultDatasetName(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

Corpus IngestText(std::string_view csv_text, const DatasetManifest& manifest, const IngestOptions& options) {
  auto rows = ParseCsv(csv_text);
  if (rows.empty()) throw Error(ErrorCode::kMissingColumn, "CSV has no header; column '" + manifest.smiles_column + "' not found");
  CsvRow header = rows.front();
  for (auto& h : header) h = std::string(Trim(h));
  // Byte order mark on the first column.
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0] = header[0].substr(3);

  Corpus corpus;
  corpus.name = manifest.name.empty() ? DefaultDatasetName(manifest.path) : manifest.name;
  const int smiles_col = ColumnIndex(header, manifest.smiles_column);
  std::vector<int> task_cols;
  if (manifest.task_columns.empty()) {
    for (size_t c = 0; c < header.size(); ++c) {
      if (static_cast<int>(c) == smiles_col) continue;
      task_cols.push_back(static_cast<int>(c));
      corpus.task_names.push_back(header[c]);
    }
  } else {
    for (const auto& t : manifest.task_columns) {
      task_cols.push_back(ColumnIndex(header, t));
      corpus.task_names.push_back(t);
    }
  }
  int active = 0;
  if (!manifest.active_task.empty()) {
    auto it = std::find(corpus.task_names.begin(), corpus.task_names.end(), manifest.active_task);
    if (it == corpus.task_names.end()) {
      throw Error(ErrorCode::kMissingColumn, "task column '" + manifest.active_task + "' not found");
    }
    active = static_cast<int>(it - corpus.task_names.begin());
  } else if (task_cols.empty()) {
    throw Error(ErrorCode::kMissingColumn, "no task column besides '" + manifest.smiles_column + "'");
  }

  IngestSummary& s = corpus.summary;
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    ++s.input_rows;
    const std::string smiles = static_cast<size_t>(smiles_col) < row.size() ? row[static_cast<size_t>(smiles_col)] : "";
    LabeledRecord rec;
    try {
      if (options.fragments == FragmentPolicy::kLargest && smiles.find('.') != std::string::npos) {
        rec.graph = ParseSmiles(LargestFragment(smiles));
      } else {
        rec.graph = ParseSmiles(smiles);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMultiFragment) {
        ++s.skipped_multi_fragment;
      } else {
        ++s.skipped_parse;
      }
      continue;
    }
    rec.row = static_cast<std::int64_t>(r - 1);
    rec.active_task = active;
    for (size_t t = 0; t < task_cols.size(); ++t) {
      const size_t c = static_cast<size_t>(task_cols[t]);
      const LabelCell cell = ParseLabelCell(c < row.size() ? row[c] : "");
      std::optional<int> label;
      if (cell == LabelCell::kOne) label = 1;
      if (cell == LabelCell::kZero) label = 0;
      if (static_cast<int>(t) == active) {
        if (cell == LabelCell::kMissing) ++s.missing_labels;
        if (cell == LabelCell::kInvalid) ++s.invalid_labels;
      }
      rec.task_labels.push_back(label);
    }
    if (rec.graph.singleton()) ++s.singleton_graphs;
    ++s.parsed;
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

Corpus Ingest(const DatasetManifest& manifest, const IngestOptions& options) {
  return IngestText(ReadFile(manifest.path), manifest, options);
}

}  // namespace maskinfo
