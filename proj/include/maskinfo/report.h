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

#ifndef MASKINFO_REPORT_H_
#define MASKINFO_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maskinfo {

inline constexpr std::string_view kToolkitVersion = "0.3.0";

struct Provenance {
  std::string version{kToolkitVersion};
  std::uint64_t seed = 0;
  std::string config_hash;  // 16 hex digits
};

struct MiRow {
  std::string dataset;
  std::string target_kind;
  std::string strategy;  // "exact", "shuffled" or a masking strategy name
  double mi_bits = 0.0;
  double h_y_bits = 0.0;
  double relative_gain = 0.0;
  std::uint64_t n_pairs = 0;
  double seed_mean = 0.0;
  double seed_std = 0.0;
};

struct JsdRow {
  std::string dataset;
  std::string target_kind;
  double tau = 0.0;
  std::optional<double> jsd_bits;  // nullopt: undefined at this tau
  int labels_kept = 0;
};

enum class ReportKind { kMi, kJsd };

struct AnalysisReport {
  ReportKind kind = ReportKind::kMi;
  std::vector<MiRow> mi_rows;
  std::vector<JsdRow> jsd_rows;
  Provenance provenance;
  // Free-form run summary lines (ingest counts and the like).
  std::vector<std::string> notes;
};

// Sorts rows by (dataset, target, strategy) for MI and (dataset, target,
// descending tau) for JSD.
void SortRows(AnalysisReport& report);

std::string FormatBits(double v);
std::string ReportToCsv(const AnalysisReport& report);
// Recognizes either report layout by its header. Throws IOFailure.
AnalysisReport ReportFromCsv(std::string_view text);

// 64-bit FNV-1a rendered as 16 lowercase hex digits.
std::string Fnv1aHex(std::string_view bytes);

// Self-contained SVG: grouped bars of mi_bits for MI reports, JSD against
// log-scaled tau for JSD reports, "no data" when there are no rows.
std::string RenderSvg(const AnalysisReport& report);

}  // namespace maskinfo

#endif  // MASKINFO_REPORT_H_
