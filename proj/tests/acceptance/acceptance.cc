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

// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria (0 when all pass).

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "maskinfo/analysis.h"
#include "maskinfo/csv.h"
#include "maskinfo/infotheory.h"
#include "maskinfo/masking.h"
#include "maskinfo/motif.h"
#include "maskinfo/report.h"
#include "maskinfo/scoring.h"
#include "oracle_tables.h"
#include "test_util.h"

namespace mi = maskinfo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::string kData = MASKINFO_TEST_DATA_DIR;

mi::DatasetManifest Dataset(const std::string& file, const std::string& name) {
  mi::DatasetManifest m;
  m.path = kData + "/" + file;
  m.name = name;
  m.task_columns = {"target"};
  m.active_task = "target";
  return m;
}

fs::path WorkDir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / fmt::format("maskinfo_acceptance_{}", ::getpid());
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Direct evaluation over the raw pair list: every probability is a count
// taken by scanning the list, with no contingency table in between.
double BruteForceMi(const std::vector<mi::LabelPair>& pairs) {
  const long double n = static_cast<long double>(pairs.size());
  std::vector<mi::LabelPair> seen;
  long double total = 0;
  for (const auto& p : pairs) {
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    long double nxy = 0, nx = 0, ny = 0;
    for (const auto& q : pairs) {
      nxy += (q.x == p.x && q.y == p.y);
      nx += (q.x == p.x);
      ny += (q.y == p.y);
    }
    total += (nxy / n) * std::log2l((nxy / n) / ((nx / n) * (ny / n)));
  }
  return static_cast<double>(total);
}

Outcome EstimatorOracle() {
  double worst = 0;
  int tables = 0;
  for (const auto& t : mi::testing::OracleTables()) {
    mi::JointCounts c;
    for (size_t x = 0; x < t.counts.size(); ++x) {
      for (int y = 0; y < 2; ++y) c.Add(static_cast<std::int64_t>(x), y, static_cast<std::uint64_t>(t.counts[x][y]));
    }
    worst = std::max(worst, std::abs(mi::MutualInformation(c) - t.mi_bits));
    ++tables;
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> rows(1, 6), cell(0, 25);
  for (int t = 0; t < 40; ++t) {
    std::vector<mi::LabelPair> pairs;
    const int k = rows(rng);
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < 2; ++y) {
        for (int i = cell(rng); i > 0; --i) pairs.push_back({x, y});
      }
    }
    if (pairs.empty()) pairs.push_back({0, 1});
    std::shuffle(pairs.begin(), pairs.end(), rng);
    worst = std::max(worst, std::abs(mi::MutualInformation(mi::Accumulate(pairs)) - BruteForceMi(pairs)));
    ++tables;
  }
  return {worst <= 1e-12, fmt::format("{} tables, max |diff| = {:.2e} bits", tables, worst)};
}

Outcome PageRankOracle() {
  double worst = 0;
  int graphs = 0;
  for (const auto& s : mi::testing::FixtureSmiles()) {
    mi::MolGraph g;
    try {
      g = mi::ParseSmiles(s);
    } catch (const mi::Error&) {
      continue;
    }
    if (g.num_atoms() > 12) continue;
    const auto pr = mi::PageRank(g);
    const auto ref = mi::testing::DenseSolve(g, 0.85);
    for (size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(pr.values[i] - ref[i]));
    ++graphs;
  }
  return {graphs > 0 && worst <= 1e-7,
          fmt::format("{} graphs with <= 12 atoms, max |diff| = {:.2e} vs dense solve of x = a x D^-1 A + (1-a)/n",
                      graphs, worst)};
}

Outcome SamplingCorrectness() {
  const auto g = mi::ParseSmiles("CC(C)Cc1ccccc1");
  mi::MaskConfig cfg;
  cfg.ratio = 0.3;
  mi::Rng rng(99);
  std::vector<int> hits(static_cast<size_t>(g.num_atoms()), 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    for (int a : mi::UniformMask(g, cfg, rng).masked_atoms) ++hits[static_cast<size_t>(a)];
  }
  double worst = 0;
  for (int h : hits) worst = std::max(worst, std::abs(static_cast<double>(h) / draws - 0.3));
  mi::MaskConfig top = cfg;
  top.ratio = 0.25;
  top.beta = 10;
  int fixtures = 0, exact = 0;
  for (const auto& s : mi::testing::ConnectedFixtures()) {
    const auto pr = mi::PageRank(mi::ParseSmiles(s));
    const int k = mi::MaskCount(top.ratio, static_cast<int>(pr.values.size()));
    ++fixtures;
    exact += mi::PerturbedTopK(pr, top, rng).masked_atoms == mi::TopK(pr.values, k);
  }
  return {g.num_atoms() == 10 && worst <= 0.01 && exact == fixtures,
          fmt::format("uniform max |freq - 0.3| = {:.4f} over {} draws; top-k exact on {}/{} fixtures", worst, draws,
                      exact, fixtures)};
}

mi::RunConfig Config(std::vector<mi::DatasetManifest> datasets) {
  mi::RunConfig cfg;
  cfg.datasets = std::move(datasets);
  cfg.seed = 0;
  cfg.workers = 4;
  return cfg;
}

const mi::MiRow* Find(const mi::AnalysisReport& r, const std::string& dataset, const std::string& target,
                      const std::string& strategy) {
  for (const auto& row : r.mi_rows) {
    if (row.dataset == dataset && row.target_kind == target && row.strategy == strategy) return &row;
  }
  return nullptr;
}

Outcome BaceUpperBoundTable() {
  auto cfg = Config({Dataset("bace.csv", "bace")});
  cfg.targets = {mi::TargetKind::kAtomType};
  const auto r = mi::RunMiAnalysis(cfg);
  const auto* row = Find(r, "bace", "atom_type", "exact");
  if (!row) return {false, "no atom_type row"};
  return {std::abs(row->mi_bits - 0.0022) <= 0.0005 && std::abs(row->h_y_bits - 0.999) <= 0.003,
          fmt::format("atom-type MI = {:.5f} (0.0022 +- 0.0005), H(Y) = {:.5f} (0.999 +- 0.003)", row->mi_bits,
                      row->h_y_bits)};
}

mi::AnalysisReport ShuffleReport(const std::vector<mi::DatasetManifest>& datasets) {
  auto cfg = Config(datasets);
  cfg.targets = {mi::TargetKind::kAtomType, mi::TargetKind::kMotifLabel};
  cfg.repeats = 5;
  return mi::RunShuffleControl(cfg);
}

Outcome ShuffledOrdering() {
  const auto r = ShuffleReport({Dataset("bace.csv", "bace"), Dataset("bbbp.csv", "bbbp")});
  bool ok = true;
  std::string detail;
  for (const char* d : {"bace", "bbbp"}) {
    const auto* motif = Find(r, d, "motif_label", "exact");
    const auto* shuffled = Find(r, d, "motif_label", "shuffled");
    const auto* atom = Find(r, d, "atom_type", "exact");
    if (!motif || !shuffled || !atom) return {false, fmt::format("missing rows for {}", d)};
    const bool order = motif->mi_bits > shuffled->seed_mean && shuffled->seed_mean > atom->mi_bits;
    const bool stable = shuffled->seed_std < 0.1 * shuffled->seed_mean;
    const bool gap = motif->mi_bits >= 5 * atom->mi_bits;
    ok = ok && order && stable && gap;
    detail += fmt::format("{}: motif {:.4f} > shuffled {:.4f}+-{:.4f} > atom {:.4f}; ", d, motif->mi_bits,
                          shuffled->seed_mean, shuffled->seed_std, atom->mi_bits);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome BaceJsdShape() {
  auto cfg = Config({Dataset("bace.csv", "bace")});
  const auto r = mi::RunJsdAnalysis(cfg);
  std::map<std::pair<std::string, double>, std::optional<double>> at;
  for (const auto& row : r.jsd_rows) at[{row.target_kind, row.tau}] = row.jsd_bits;
  const auto m001 = at[{"motif_label", 0.01}], a001 = at[{"atom_type", 0.01}], m1 = at[{"motif_label", 1.0}];
  if (!m001 || !a001 || !m1) return {false, "a required curve point is undefined"};
  return {*m001 > *a001 && *m001 > *m1,
          fmt::format("JSD motif(0.01) = {:.4f}, atom(0.01) = {:.4f}, motif(1.0) = {:.4f}", *m001, *a001, *m1)};
}

Outcome MaskingIndifference() {
  const auto manifest = Dataset("bace.csv", "bace");
  const auto corpus = mi::Ingest(manifest);
  // Stand-in for learned per-atom scores: seeded uniform noise.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string scores;
  for (const auto& rec : corpus.records) {
    for (int a = 0; a < rec.graph.num_atoms(); ++a) scores += fmt::format("{}{:.6f}", a ? "," : "", u(rng));
    scores += '\n';
  }
  const auto path = (WorkDir() / "bace_external_scores.csv").string();
  mi::WriteFile(path, scores);
  auto cfg = Config({manifest});
  cfg.external_scores = {path};
  cfg.mask.ratio = 0.25;
  cfg.repeats = 5;
  const auto r = mi::RunMaskSim(cfg);
  std::vector<const mi::MiRow*> rows;
  for (const char* s : {"uniform", "pagerank", "external"}) {
    const auto* row = Find(r, "bace", "atom_type", s);
    if (!row) return {false, fmt::format("missing {} row", s)};
    rows.push_back(row);
  }
  bool ok = true;
  double worst = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      const double pooled = std::sqrt(0.5 * (rows[i]->seed_std * rows[i]->seed_std + rows[j]->seed_std * rows[j]->seed_std));
      const double z = pooled > 0 ? std::abs(rows[i]->seed_mean - rows[j]->seed_mean) / pooled : INFINITY;
      worst = std::max(worst, z);
      ok = ok && z < 3.0;
    }
  }
  return {ok, fmt::format("uniform {:.5f}+-{:.5f}, pagerank {:.5f}+-{:.5f}, external {:.5f}+-{:.5f}; max gap {:.2f} "
                          "pooled std",
                          rows[0]->seed_mean, rows[0]->seed_std, rows[1]->seed_mean, rows[1]->seed_std,
                          rows[2]->seed_mean, rows[2]->seed_std, worst)};
}

mi::DatasetManifest FixtureDataset() {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution noise(0.3), coin(0.5);
  std::string text = "smiles,target\n";
  const auto fixtures = mi::testing::ConnectedFixtures();
  for (int k = 0; k < 20; ++k) {
    for (size_t g = 0; g < fixtures.size(); ++g) {
      text += mi::CsvLine({fixtures[g], std::to_string(noise(rng) ? static_cast<int>(coin(rng)) : static_cast<int>(g % 2))});
    }
  }
  const auto path = (WorkDir() / "fixtures.csv").string();
  mi::WriteFile(path, text);
  mi::DatasetManifest m;
  m.path = path;
  m.name = "fixtures";
  m.task_columns = {"target"};
  m.active_task = "target";
  return m;
}

Outcome ShuffleCollapse() {
  const auto r = ShuffleReport({Dataset("bace.csv", "bace"), Dataset("bbbp.csv", "bbbp"), FixtureDataset()});
  bool ok = true;
  std::string detail;
  for (const char* d : {"bace", "bbbp", "fixtures"}) {
    const auto* exact = Find(r, d, "motif_label", "exact");
    const auto* shuffled = Find(r, d, "motif_label", "shuffled");
    if (!exact || !shuffled) return {false, fmt::format("missing rows for {}", d)};
    const double ratio = shuffled->seed_mean / exact->mi_bits;
    if (exact->mi_bits > 0.01) ok = ok && ratio < 0.4;
    detail += fmt::format("{} {:.1f}%; ", d, 100 * ratio);
  }
  detail.resize(detail.size() - 2);
  return {ok, "shuffled/exact motif MI: " + detail};
}

Outcome CoverageProperties() {
  bool ok = true;
  std::string detail;
  for (const auto& m : {Dataset("bace.csv", "bace"), Dataset("bbbp.csv", "bbbp")}) {
    const auto corpus = mi::Ingest(m);
    std::vector<mi::MolGraph> graphs;
    for (const auto& rec : corpus.records) graphs.push_back(rec.graph);
    const auto vocab = mi::MotifVocab::Build(graphs);
    const auto cov = mi::Coverage(vocab, graphs);
    const bool all_one =
        std::all_of(cov.per_graph_r.begin(), cov.per_graph_r.end(), [](double r) { return r == 1.0; });
    ok = ok && cov.overlap_ratio == 1.0 && all_one && cov.per_graph_r.size() == graphs.size();
    detail += fmt::format("{} self overlap {} over {} graphs; ", m.name, cov.overlap_ratio, graphs.size());
  }
  std::vector<mi::MolGraph> chains, rings;
  for (const char* s : {"CCO", "CCN", "CCCl", "CC(C)O"}) chains.push_back(mi::ParseSmiles(s));
  for (const char* s : {"c1ccccc1", "C1CCCCC1", "c1ccncc1", "C1CC1"}) rings.push_back(mi::ParseSmiles(s));
  const auto disjoint = mi::Coverage(mi::MotifVocab::Build(chains), rings);
  const bool all_zero =
      std::all_of(disjoint.per_graph_r.begin(), disjoint.per_graph_r.end(), [](double r) { return r == 0.0; });
  ok = ok && all_zero && disjoint.overlap_ratio == 0.0;
  detail += fmt::format("disjoint overlap {}, max r {}", disjoint.overlap_ratio,
                        *std::max_element(disjoint.per_graph_r.begin(), disjoint.per_graph_r.end()));
  return {ok, detail};
}

int RunCli(const std::string& args) {
  const int status = std::system(fmt::format("\"{}\" {} >/dev/null 2>&1", MASKINFO_CLI_PATH, args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome Determinism() {
  const std::string inputs = fmt::format("-i {0}/bace.csv -i {0}/bbbp.csv", kData);
  const std::vector<std::pair<std::string, int>> runs = {{"a", 1}, {"b", 3}, {"c", 1}};
  for (const auto& [tag, workers] : runs) {
    const auto out = (WorkDir() / fmt::format("run_{}", tag)).string();
    for (const char* sub : {"mi", "jsd", "mask-sim"}) {
      const int rc = RunCli(fmt::format("--seed 11 --workers {} --out-dir {} {} {}", workers, out, sub, inputs));
      if (rc != 0) return {false, fmt::format("{} exited with {}", sub, rc)};
    }
  }
  int identical = 0, compared = 0;
  for (const char* file : {"mi.csv", "jsd.csv", "mask_sim.csv"}) {
    const auto a = mi::ReadFile((WorkDir() / "run_a" / file).string());
    for (const char* other : {"run_b", "run_c"}) {
      ++compared;
      identical += !a.empty() && a == mi::ReadFile((WorkDir() / other / file).string());
    }
  }
  return {identical == compared,
          fmt::format("{}/{} CSV pairs byte-identical across --workers 1, 3 and a repeat run", identical, compared)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "estimator matches direct evaluation", 1, EstimatorOracle},
      {2, "PageRank matches dense solve", 1, PageRankOracle},
      {3, "sampling correctness", 10, SamplingCorrectness},
      {4, "Bace atom-type MI and H(Y)", 30, BaceUpperBoundTable},
      {5, "motif > shuffled motif > atom-type MI", 120, ShuffledOrdering},
      {6, "Bace JSD shape", 60, BaceJsdShape},
      {7, "masking strategies indistinguishable", 120, MaskingIndifference},
      {8, "shuffle collapse", 120, ShuffleCollapse},
      {9, "coverage properties", 60, CoverageProperties},
      {10, "determinism across worker counts", 300, Determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    if (!in_time) o.detail += fmt::format("; over the {:g} s budget", c.budget_s);
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << fmt::format("criterion {:>2}: {} - {}: {} [{:.2f} s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                             o.detail, secs);
  }
  fs::remove_all(WorkDir());
  return failed;
}
