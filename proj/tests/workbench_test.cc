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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include <fmt/format.h>

#include "maskinfo/analysis.h"
#include "maskinfo/csv.h"
#include "maskinfo/dataset.h"
#include "maskinfo/error.h"
#include "maskinfo/report.h"
#include "test_util.h"

namespace maskinfo {
namespace {

namespace fs = std::filesystem;
using testing::ThrownCode;

fs::path TempDir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / fmt::format("maskinfo_wb_{}_{}", tag, ::testing::UnitTest::GetInstance()->random_seed());
  fs::create_directories(dir);
  return dir;
}

DatasetManifest Manifest(const std::string& path, std::vector<std::string> tasks = {"y"}) {
  DatasetManifest m;
  m.path = path;
  m.name = "toy";
  m.task_columns = std::move(tasks);
  m.active_task = m.task_columns.front();
  return m;
}

size_t Count(const std::string& s, const std::string& needle) {
  size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

TEST(Csv, QuotesCrlfAndBlankLines) {
  const auto rows = ParseCsv("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\n3,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (CsvRow{"x,1", "say \"hi\""}));
  EXPECT_EQ(rows[2], (CsvRow{"3", ""}));
  EXPECT_EQ(ThrownCode([] { ParseCsv("a,\"open\n"); }), ErrorCode::kIOFailure);
  EXPECT_EQ(ParseCsv(CsvLine({"p,q", "r\"s", "t"})), (std::vector<CsvRow>{{"p,q", "r\"s", "t"}}));
}

TEST(Ingest, SkipsUnparseableRows) {
  const auto c = IngestText("smiles,y\nCCO,1\nC1CC,0\nc1ccccc1,0\n", Manifest("toy.csv"));
  EXPECT_EQ(c.records.size(), 2u);
  EXPECT_EQ(c.summary.input_rows, 3);
  EXPECT_EQ(c.summary.skipped_parse, 1);
  EXPECT_EQ(c.summary.parsed + c.summary.skipped(), c.summary.input_rows);
  EXPECT_EQ(c.records[1].row, 2);
  EXPECT_EQ(c.records[1].label(), 0);
}

TEST(Ingest, MissingAndInvalidLabels) {
  const auto c = IngestText("smiles,y\nCCO,\nCCN, 1.0 \nCCC,yes\n", Manifest("toy.csv"));
  ASSERT_EQ(c.records.size(), 3u);
  EXPECT_FALSE(c.records[0].label().has_value());
  EXPECT_EQ(c.records[1].label(), 1);
  EXPECT_FALSE(c.records[2].label().has_value());
  EXPECT_EQ(c.summary.missing_labels, 1);
  EXPECT_EQ(c.summary.invalid_labels, 1);
  EXPECT_EQ(ParseLabelCell("0.0"), LabelCell::kZero);
  EXPECT_EQ(ParseLabelCell(""), LabelCell::kMissing);
  EXPECT_EQ(ParseLabelCell("2"), LabelCell::kInvalid);
}

TEST(Ingest, ColumnTypoNamesTheColumn) {
  try {
    IngestText("smiles,y\nCCO,1\n", Manifest("toy.csv", {"label"}));
    FAIL() << "expected MissingColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingColumn);
    EXPECT_NE(std::string(e.what()).find("label"), std::string::npos);
  }
  auto m = Manifest("toy.csv");
  m.smiles_column = "SMILES";
  EXPECT_EQ(ThrownCode([&] { IngestText("smiles,y\nCCO,1\n", m); }), ErrorCode::kMissingColumn);
  EXPECT_EQ(ThrownCode([] { Ingest(Manifest("/nonexistent/toy.csv")); }), ErrorCode::kIOFailure);
}

TEST(Ingest, FragmentsAndAccounting) {
  const std::string text = "smiles,y\n[Na+].[Cl-],1\nCCO.O,0\nC,1\nCC(=O)O,0\n";
  const auto rejected = IngestText(text, Manifest("toy.csv"));
  EXPECT_EQ(rejected.summary.skipped_multi_fragment, 2);
  EXPECT_EQ(rejected.summary.singleton_graphs, 1);
  EXPECT_EQ(rejected.summary.parsed + rejected.summary.skipped(), 4);
  IngestOptions largest;
  largest.fragments = FragmentPolicy::kLargest;
  const auto kept = IngestText(text, Manifest("toy.csv"), largest);
  EXPECT_EQ(kept.records.size(), 4u);
  EXPECT_EQ(kept.records[1].graph.num_atoms(), 3);
  EXPECT_EQ(kept.summary.parsed + kept.summary.skipped(), 4);
}

TEST(Ingest, RealDatasetAccounting) {
  for (const char* name : {"bace.csv", "bbbp.csv"}) {
    const auto path = std::string(MASKINFO_TEST_DATA_DIR) + "/" + name;
    const auto header = ParseCsv(ReadFile(path)).front();
    const auto c = Ingest(Manifest(path, {header.back()}));
    EXPECT_GT(c.summary.parsed, 1000);
    EXPECT_EQ(c.summary.parsed + c.summary.skipped(), c.summary.input_rows) << name;
  }
}

AnalysisReport SampleReport(ReportKind kind) {
  AnalysisReport r;
  r.kind = kind;
  r.provenance.seed = 7;
  r.provenance.config_hash = Fnv1aHex("cfg");
  if (kind == ReportKind::kMi) {
    r.mi_rows.push_back({"toy", "motif_label", "exact", 0.25, 0.999, 0.25 / 0.999, 120, 0.25, 0.0});
    r.mi_rows.push_back({"toy", "atom_type", "uniform", 0.0021, 0.999, 0.0021 / 0.999, 900, 0.0021, 0.0003});
    r.mi_rows.push_back({"toy", "atom_type", "pagerank", 0.0018, 0.999, 0.0018 / 0.999, 900, 0.0018, 0.0004});
  } else {
    for (double tau : {1.0, 0.1, 0.01}) {
      r.jsd_rows.push_back({"toy", "atom_type", tau, 0.03 / tau * 0.01, 5});
      r.jsd_rows.push_back({"toy", "motif_label", tau, tau < 0.05 ? std::nullopt : std::optional<double>(0.2), 9});
    }
  }
  SortRows(r);
  return r;
}

TEST(Report, CsvRoundTrip) {
  for (auto kind : {ReportKind::kMi, ReportKind::kJsd}) {
    const auto csv = ReportToCsv(SampleReport(kind));
    EXPECT_EQ(ReportToCsv(ReportFromCsv(csv)), csv);
  }
  const auto mi = ReportToCsv(SampleReport(ReportKind::kMi));
  EXPECT_EQ(mi.substr(0, mi.find('\n')),
            "dataset,target_kind,strategy,mi_bits,h_y_bits,relative_gain,n_pairs,seed_mean,seed_std,version,seed,"
            "config_hash");
  const auto jsd = ReportToCsv(SampleReport(ReportKind::kJsd));
  EXPECT_EQ(jsd.substr(0, jsd.find('\n')), "dataset,target_kind,tau,jsd_bits,labels_kept,defined,version,seed,config_hash");
  EXPECT_EQ(Count(jsd, ",0,0.3.0,"), 1u);
  EXPECT_EQ(ThrownCode([] { ReportFromCsv("nonsense,header\n1,2\n"); }), ErrorCode::kIOFailure);
}

TEST(Report, SortOrder) {
  const auto r = SampleReport(ReportKind::kMi);
  EXPECT_EQ(r.mi_rows[0].strategy, "pagerank");
  EXPECT_EQ(r.mi_rows[1].strategy, "uniform");
  EXPECT_EQ(r.mi_rows[2].target_kind, "motif_label");
  const auto j = SampleReport(ReportKind::kJsd);
  EXPECT_EQ(j.jsd_rows[0].tau, 1.0);
  EXPECT_EQ(j.jsd_rows[2].tau, 0.01);
  EXPECT_EQ(FormatBits(-0.0), "0.0000000000");
}

TEST(Svg, EmptyReportHasAxesAndNote) {
  for (auto kind : {ReportKind::kMi, ReportKind::kJsd}) {
    AnalysisReport empty;
    empty.kind = kind;
    const auto svg = RenderSvg(empty);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("no data"), std::string::npos);
    EXPECT_GE(Count(svg, "<line"), 2u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
}

TEST(Svg, TwoSeriesGiveTwoPolylinesAndLegend) {
  const auto svg = RenderSvg(SampleReport(ReportKind::kJsd));
  EXPECT_EQ(Count(svg, "<polyline"), 2u);
  EXPECT_EQ(Count(svg, "<g class=\"legend\">"), 1u);
  EXPECT_NE(svg.find("atom_type"), std::string::npos);
  EXPECT_NE(svg.find("motif_label"), std::string::npos);
  EXPECT_EQ(svg, RenderSvg(SampleReport(ReportKind::kJsd)));
  const auto bars = RenderSvg(SampleReport(ReportKind::kMi));
  EXPECT_EQ(bars, RenderSvg(SampleReport(ReportKind::kMi)));
  EXPECT_GE(Count(bars, "<rect"), 3u);
}

TEST(RunConfig, HashIgnoresWorkersAndOutDir) {
  RunConfig a;
  a.datasets.push_back(Manifest("x.csv"));
  RunConfig b = a;
  b.workers = 8;
  b.out_dir = "/tmp/elsewhere";
  EXPECT_EQ(a.Hash(), b.Hash());
  EXPECT_EQ(a.Hash().size(), 16u);
  b.seed = 1;
  EXPECT_NE(a.Hash(), b.Hash());
  b = a;
  b.mask.ratio = 0.3;
  EXPECT_NE(a.Hash(), b.Hash());
}

// Every class-1 molecule is a ring, every class-0 molecule is acyclic, so the
// motif label determines Y.
TEST(MiAnalysis, ClassExclusiveMotifsReachEntropyOfY) {
  const auto dir = TempDir("exclusive");
  const auto path = (dir / "excl.csv").string();
  WriteFile(path, "smiles,y\nc1ccccc1,1\nc1ccncc1,1\nC1CCCCC1,1\nCCO,0\nCCN,0\nCC(C)O,0\n");
  RunConfig cfg;
  cfg.datasets.push_back(Manifest(path));
  const auto r = RunMiAnalysis(cfg);
  ASSERT_EQ(r.mi_rows.size(), 2u);
  const auto& motif = r.mi_rows[1];
  EXPECT_EQ(motif.target_kind, "motif_label");
  EXPECT_NEAR(motif.mi_bits, motif.h_y_bits, 1e-12);
  EXPECT_NEAR(motif.h_y_bits, 1.0, 1e-12);
  EXPECT_NEAR(motif.relative_gain, 1.0, 1e-12);
  EXPECT_EQ(motif.n_pairs, 6u);
  const auto& atom = r.mi_rows[0];
  EXPECT_EQ(atom.target_kind, "atom_type");
  EXPECT_LT(atom.mi_bits, atom.h_y_bits);
  EXPECT_EQ(r.provenance.config_hash, cfg.Hash());
  fs::remove_all(dir);
}

std::string FixtureCsv(int copies, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution noise(0.3), coin(0.5);
  std::string text = "smiles,y\n";
  const auto fixtures = testing::ConnectedFixtures();
  for (int k = 0; k < copies; ++k) {
    for (size_t g = 0; g < fixtures.size(); ++g) {
      const int y = noise(rng) ? static_cast<int>(coin(rng)) : static_cast<int>(g % 2);
      text += CsvLine({fixtures[g], std::to_string(y)});
    }
  }
  return text;
}

std::string RandomScores(const Corpus& corpus, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string out;
  for (const auto& rec : corpus.records) {
    for (int a = 0; a < rec.graph.num_atoms(); ++a) out += fmt::format("{}{:.6f}", a ? "," : "", u(rng));
    out += "\n";
  }
  return out;
}

TEST(MaskSim, RowsDeterminismAndConvergence) {
  const auto dir = TempDir("masksim");
  const auto path = (dir / "fix.csv").string();
  WriteFile(path, FixtureCsv(40, 3));
  const auto scores = (dir / "scores.csv").string();
  WriteFile(scores, RandomScores(Ingest(Manifest(path)), 4));
  RunConfig cfg;
  cfg.datasets.push_back(Manifest(path));
  cfg.external_scores = {scores};
  cfg.seed = 5;
  const auto r = RunMaskSim(cfg);
  ASSERT_EQ(r.mi_rows.size(), 4u);
  const MiRow* exact = nullptr;
  const MiRow* uniform = nullptr;
  for (const auto& row : r.mi_rows) {
    EXPECT_EQ(row.target_kind, "atom_type");
    if (row.strategy == "exact") {
      exact = &row;
      continue;
    }
    EXPECT_GT(row.seed_std, 0.0) << row.strategy;
    EXPECT_LE(row.mi_bits, row.h_y_bits);
    if (row.strategy == "uniform") uniform = &row;
  }
  ASSERT_TRUE(exact && uniform);
  EXPECT_LT(std::abs(uniform->seed_mean - exact->mi_bits), 4 * uniform->seed_std + 0.005);

  cfg.workers = 3;
  EXPECT_EQ(ReportToCsv(RunMaskSim(cfg)), ReportToCsv(r));
  cfg.seed = 6;
  EXPECT_NE(ReportToCsv(RunMaskSim(cfg)), ReportToCsv(r));
  fs::remove_all(dir);
}

TEST(JsdAnalysis, CurvePerTarget) {
  const auto dir = TempDir("jsd");
  const auto path = (dir / "fix.csv").string();
  WriteFile(path, FixtureCsv(5, 9));
  RunConfig cfg;
  cfg.datasets.push_back(Manifest(path));
  const auto r = RunJsdAnalysis(cfg);
  EXPECT_EQ(r.kind, ReportKind::kJsd);
  EXPECT_EQ(r.jsd_rows.size(), 2 * DefaultTauGrid().size());
  for (const auto& row : r.jsd_rows) {
    if (row.jsd_bits) {
      EXPECT_GE(*row.jsd_bits, 0.0);
      EXPECT_LE(*row.jsd_bits, 1.0);
    }
  }
  fs::remove_all(dir);
}

TEST(ShuffleAnalysis, ExactAndShuffledRows) {
  const auto dir = TempDir("shuffle");
  const auto path = (dir / "fix.csv").string();
  WriteFile(path, FixtureCsv(20, 10));
  RunConfig cfg;
  cfg.datasets.push_back(Manifest(path));
  cfg.targets = {TargetKind::kMotifLabel};
  const auto r = RunShuffleControl(cfg);
  ASSERT_EQ(r.mi_rows.size(), 2u);
  EXPECT_EQ(r.mi_rows[0].strategy, "exact");
  EXPECT_EQ(r.mi_rows[1].strategy, "shuffled");
  EXPECT_LT(r.mi_rows[1].seed_mean, r.mi_rows[0].mi_bits);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace maskinfo
