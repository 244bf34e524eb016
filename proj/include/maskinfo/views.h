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

#ifndef MASKINFO_VIEWS_H_
#define MASKINFO_VIEWS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "maskinfo/masking.h"
#include "maskinfo/targets.h"

namespace maskinfo {

// One masked view of one graph, as handed to an external trainer.
struct ViewRecord {
  std::int64_t graph_index = 0;
  int draw = 0;
  std::string smiles;
  std::string strategy;  // command-line strategy name
  MaskPlan plan;
  TargetKind target_type = TargetKind::kAtomType;
  std::vector<int> targets;
  std::uint64_t seed = 0;  // substream seed that produced this plan

  bool operator==(const ViewRecord&) const = default;
};

// JSON object on one line with keys smiles, masked_atoms, target_type,
// targets, strategy, seed, plus graph_index, draw, masked_motifs and plan.
std::string ViewToJson(const ViewRecord& view);
ViewRecord ViewFromJson(const std::string& line);

// Throws IOFailure.
void WriteViews(const std::vector<ViewRecord>& views, const std::string& path);
std::vector<ViewRecord> ReadViews(const std::string& path);

}  // namespace maskinfo

#endif  // MASKINFO_VIEWS_H_
