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

#ifndef MASKINFO_DATASET_H_
#define MASKINFO_DATASET_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maskinfo/molgraph.h"

namespace maskinfo {

struct DatasetManifest {
  std::string path;
  std::string name;  // defaults to the file stem
  std::string smiles_column = "smiles";
  // Empty: every column except the SMILES column.
  std::vector<std::string> task_columns;
  // Empty: the first task column.
  std::string active_task;
};

enum class FragmentPolicy {
  kReject,   // multi-fragment rows are skipped and counted
  kLargest,  // keep the fragment with the most heavy atoms
};

struct IngestOptions {
  FragmentPolicy fragments = FragmentPolicy::kReject;
};

struct IngestSummary {
  std::int64_t input_rows = 0;
  std::int64_t parsed = 0;
  std::int64_t skipped_parse = 0;
  std::int64_t skipped_multi_fragment = 0;
  // Among parsed rows, for the active task.
  std::int64_t missing_labels = 0;
  std::int64_t invalid_labels = 0;
  std::int64_t singleton_graphs = 0;

  std::int64_t skipped() const { return skipped_parse + skipped_multi_fragment; }
};

struct Corpus {
  std::string name;
  std::vector<std::string> task_names;
  std::vector<LabeledRecord> records;
  IngestSummary summary;
};

// Binary label cells: "1", "0", "1.0", "0.0" (surrounding spaces ignored).
// Empty means missing; anything else is treated as missing and counted as
// invalid.
enum class LabelCell { kZero, kOne, kMissing, kInvalid };
LabelCell ParseLabelCell(std::string_view cell);

// Throws MissingColumn naming the column, IOFailure when unreadable.
Corpus Ingest(const DatasetManifest& manifest, const IngestOptions& options = {});
Corpus IngestText(std::string_view csv_text, const DatasetManifest& manifest, const IngestOptions& options = {});

std::string DefaultDatasetName(const std::string& path);

}  // namespace maskinfo

#endif  // MASKINFO_DATASET_H_
