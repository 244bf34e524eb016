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

#include "maskinfo/views.h"

#include <fstream>

#include <nlohmann/json.hpp>

#include "maskinfo/error.h"

namespace maskinfo {

using nlohmann::ordered_json;

std::string ViewToJson(const ViewRecord& view) {
  ordered_json j;
  j["smiles"] = view.smiles;
  j["masked_atoms"] = view.plan.masked_atoms;
  j["target_type"] = std::string(TargetKindName(view.target_type));
  j["targets"] = view.targets;
  j["strategy"] = view.strategy;
  j["seed"] = view.seed;
  j["graph_index"] = view.graph_index;
  j["draw"] = view.draw;
  j["masked_motifs"] = view.plan.masked_motifs;
  j["plan"] = std::string(PlanKindName(view.plan.kind));
  return j.dump();
}

ViewRecord ViewFromJson(const std::string& line) {
  ViewRecord view;
  try {
    const auto j = ordered_json::parse(line);
    view.smiles = j.at("smiles").get<std::string>();
    view.plan.masked_atoms = j.at("masked_atoms").get<std::vector<int>>();
    const auto target = ParseTargetKind(j.at("target_type").get<std::string>());
    if (!target) throw Error(ErrorCode::kIOFailure, "unknown target_type in view record");
    view.target_type = *target;
    view.targets = j.at("targets").get<std::vector<int>>();
    view.strategy = j.at("strategy").get<std::string>();
    view.seed = j.at("seed").get<std::uint64_t>();
    view.graph_index = j.value("graph_index", std::int64_t{0});
    view.draw = j.value("draw", 0);
    view.plan.masked_motifs = j.value("masked_motifs", std::vector<int>{});
    std::optional<PlanKind> kind;
    if (j.contains("plan")) {
      kind = ParsePlanKind(j.at("plan").get<std::string>());
    } else if (auto s = ParseMaskStrategy(view.strategy)) {
      kind = PlanKindFor(*s);
    }
    if (!kind) throw Error(ErrorCode::kIOFailure, "cannot determine plan kind of view record");
    view.plan.kind = *kind;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIOFailure, std::string("malformed view record: ") + e.what());
  }
  return view;
}

void WriteViews(const std::vector<ViewRecord>& views, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot open " + path + " for writing");
  for (const auto& v : views) out << ViewToJson(v) << '\n';
  if (!out) throw Error(ErrorCode::kIOFailure, "write failed for " + path);
}

std::vector<ViewRecord> ReadViews(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOFailure, "cannot open " + path);
  std::vector<ViewRecord> views;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) views.push_back(ViewFromJson(line));
  }
  return views;
}

}  // namespace maskinfo
