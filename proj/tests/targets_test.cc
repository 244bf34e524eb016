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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "maskinfo/views.h"
#include "test_util.h"

namespace maskinfo {
namespace {

using testing::ThrownCode;

MaskPlan Atoms(std::vector<int> atoms) {
  MaskPlan p;
  p.masked_atoms = std::move(atoms);
  return p;
}

Matrix Rows(std::vector<std::vector<double>> rows) {
  Matrix m;
  m.rows = static_cast<int>(rows.size());
  m.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (auto& r : rows) m.data.insert(m.data.end(), r.begin(), r.end());
  return m;
}

TEST(AtomTypeTargets, Examples) {
  const auto g = ParseSmiles("CCO");
  const auto t = AtomTypeTargets(g, Atoms({1, 2}));
  EXPECT_EQ(t.labels, (std::vector<int>{6, 8}));
  EXPECT_EQ(t.unit_ids, (std::vector<int>{1, 2}));
  EXPECT_EQ(t.label_space_size, 119);
  EXPECT_EQ(AtomTypeTargets(ParseSmiles("C[Xx]"), Atoms({1})).labels, (std::vector<int>{0}));
  const auto empty = AtomTypeTargets(g, MaskPlan{});
  EXPECT_TRUE(empty.labels.empty());
  EXPECT_TRUE(empty.unit_ids.empty());
}

TEST(AtomTypeTargets, PermutationEquivariant) {
  std::mt19937_64 rng(3);
  for (const auto& s : testing::ConnectedFixtures()) {
    const auto g = ParseSmiles(s);
    const auto perm = testing::RandomPermutation(g.num_atoms(), rng);
    const auto h = testing::Permuted(g, perm, rng);
    for (int a = 0; a < g.num_atoms(); ++a) {
      EXPECT_EQ(AtomTypeTargets(g, Atoms({a})).labels, AtomTypeTargets(h, Atoms({perm[static_cast<size_t>(a)]})).labels);
    }
  }
}

TEST(MotifTargets, LookupUnknownAndOrder) {
  const auto g = ParseSmiles("CCO");
  auto part = Decompose(g);
  std::map<std::string, std::int64_t> counts;
  for (char c = 'a'; c < 'h'; ++c) counts[std::string(1, c)] = 10;
  counts[part.signatures[0]] = 1;
  const auto vocab = MotifVocab::FromCounts(counts);
  MaskPlan p;
  p.masked_motifs = {0};
  const auto t = MotifTargets(part, p, vocab);
  EXPECT_EQ(t.labels, (std::vector<int>{7}));
  EXPECT_EQ(t.label_space_size, 9);
  EXPECT_EQ(t.unknown_count, 0);

  const auto tol = Decompose(ParseSmiles("C1CCCCC1C"));
  const auto unk = MotifTargets(tol, p, vocab);
  EXPECT_EQ(unk.labels, (std::vector<int>{8}));
  EXPECT_EQ(unk.unknown_count, 1);

  const auto tvocab = MotifVocab::Build(std::vector<MolGraph>{ParseSmiles("C1CCCCC1C"), ParseSmiles("C1CCCCC1")});
  MaskPlan two;
  two.masked_motifs = {0, 1};
  const auto both = MotifTargets(tol, two, tvocab);
  EXPECT_EQ(both.unit_ids, (std::vector<int>{0, 1}));
  // The ring is seen twice, the methyl once.
  EXPECT_EQ(both.labels, (std::vector<int>{0, 1}));
}

TEST(VqTargets, Examples) {
  const auto cb = Rows({{0, 0}, {1, 1}});
  EXPECT_EQ(NearestCode(std::vector<double>{0.9, 0.8}, cb), 1);
  EXPECT_EQ(NearestCode(std::vector<double>{0.5, 0.5}, cb), 0);
  const auto t = VqTargets(Atoms({0, 1}), Rows({{0.9, 0.8}, {0.1, -0.2}}), cb);
  EXPECT_EQ(t.labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(t.label_space_size, 2);
  EXPECT_EQ(ThrownCode([&] { VqTargets(Atoms({0}), Rows({{1, 2, 3}}), cb); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(ThrownCode([&] { NearestCode(std::vector<double>{1.0}, cb); }), ErrorCode::kDimMismatch);
}

TEST(VqTargets, MatchesExhaustiveScanOn512Codes) {
  std::mt19937_64 rng(512);
  std::normal_distribution<double> normal;
  const int dim = 16;
  std::vector<std::vector<double>> codes(512, std::vector<double>(dim));
  for (auto& r : codes) for (auto& v : r) v = normal(rng);
  std::vector<std::vector<double>> emb(10, std::vector<double>(dim));
  for (auto& r : emb) for (auto& v : r) v = normal(rng);
  const auto cb = Rows(codes);
  const auto t = VqTargets(Atoms({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), Rows(emb), cb);
  for (int a = 0; a < 10; ++a) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 512; ++r) {
      double d = 0;
      for (int j = 0; j < dim; ++j) d += (emb[a][j] - codes[r][j]) * (emb[a][j] - codes[r][j]);
      if (d < bd) bd = d, best = r;
    }
    EXPECT_EQ(t.labels[static_cast<size_t>(a)], best);
    EXPECT_LT(t.labels[static_cast<size_t>(a)], t.label_space_size);
  }
  // Shifting embeddings and codes together changes nothing.
  for (auto& r : codes) for (int j = 0; j < dim; ++j) r[j] += 3.0 * j;
  for (auto& r : emb) for (int j = 0; j < dim; ++j) r[j] += 3.0 * j;
  EXPECT_EQ(VqTargets(Atoms({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), Rows(emb), Rows(codes)).labels, t.labels);
}

TEST(VqTargets, OptionalNormalization) {
  const auto cb = Rows({{1, 0}, {4, 4}});
  EXPECT_EQ(NearestCode(std::vector<double>{3, 3}, cb), 1);
  EXPECT_EQ(NearestCode(std::vector<double>{3, 3}, cb, true), 0);
}

TEST(ArgmaxTargets, Examples) {
  EXPECT_EQ(ArgmaxIndex(std::vector<double>{0.1, 3.0, -1}), 1);
  EXPECT_EQ(ArgmaxIndex(std::vector<double>{2, 2, 2}), 0);
  const auto logits = Rows({{0.1, 3.0, -1}, {1, 1, 1}});
  const auto t = ArgmaxTargets(Atoms({0, 1}), logits);
  EXPECT_EQ(t.labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(t.label_space_size, 3);
  EXPECT_EQ(ThrownCode([&] { ArgmaxTargets(Atoms({0}), logits, 4); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(ThrownCode([&] { ArgmaxTargets(Atoms({2}), logits); }), ErrorCode::kShapeMismatch);
}

// With a scaled identity codebook the nearest code of a unit-norm vector is
// its largest coordinate.
TEST(ArgmaxTargets, AgreesWithScaledIdentityCodebook) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  const int dim = 12;
  std::vector<std::vector<double>> id(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 2.5;
  const auto cb = Rows(id);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(dim);
    double norm = 0;
    for (auto& v : x) v = normal(rng), norm += v * v;
    for (auto& v : x) v /= std::sqrt(norm);
    EXPECT_EQ(NearestCode(x, cb), ArgmaxIndex(x));
  }
}

TEST(Loaders, CodebookAndEmbeddings) {
  const auto cb = ParseCodebook("c0,c1\n0,0\n1,1\n");
  EXPECT_EQ(cb.rows, 2);
  EXPECT_EQ(cb.cols, 2);
  EXPECT_EQ(ThrownCode([] { ParseCodebook("0,0\n1\n"); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(ThrownCode([] { ParseCodebook("a,b\n"); }), ErrorCode::kShapeMismatch);

  const auto table = ParseEmbeddings("graph,atom,v0,v1\n0,1,0.5,0.5\n0,0,1,2\n3,0,9,9\n");
  EXPECT_EQ(table.dim(), 2);
  const auto m = table.ForGraph(0, 2);
  EXPECT_EQ(m.data, (std::vector<double>{1, 2, 0.5, 0.5}));
  EXPECT_EQ(ThrownCode([&] { table.ForGraph(0, 3); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(ThrownCode([&] { table.ForGraph(1, 1); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(ThrownCode([] { ParseEmbeddings("0,0,1,2\n0,1,1\n"); }), ErrorCode::kDimMismatch);
  EXPECT_EQ(ThrownCode([] { LoadCodebook("/nonexistent/cb.csv"); }), ErrorCode::kIOFailure);
}

TEST(TargetKind, Names) {
  for (auto k : {TargetKind::kAtomType, TargetKind::kMotifLabel, TargetKind::kArgmaxToken, TargetKind::kVqCode}) {
    EXPECT_EQ(ParseTargetKind(TargetKindName(k)), k);
  }
  EXPECT_FALSE(ParseTargetKind("atom").has_value());
}

ViewRecord SampleView(const MolGraph& g, const MotifPartition& part, std::int64_t index, std::uint64_t seed) {
  Rng rng(seed);
  ViewRecord v;
  v.graph_index = index;
  v.smiles = g.source_smiles();
  v.strategy = "motifpred";
  v.plan = MotifPredMask(part, MaskConfig{}, rng);
  v.target_type = TargetKind::kAtomType;
  v.targets = AtomTypeTargets(g, v.plan).labels;
  v.seed = seed;
  return v;
}

TEST(Views, RoundTripAndDeterminism) {
  const std::vector<std::string> smiles = {"CC(=O)Oc1ccccc1C(=O)O", "C\"C"};
  std::vector<ViewRecord> views;
  const auto g0 = ParseSmiles(smiles[0]);
  views.push_back(SampleView(g0, Decompose(g0), 0, 11));
  // A SMILES-looking string that needs JSON escaping still round-trips.
  ViewRecord odd = views[0];
  odd.smiles = smiles[1];
  odd.graph_index = 1;
  odd.draw = 3;
  views.push_back(odd);

  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "maskinfo_views_a.jsonl").string();
  const auto b = (dir / "maskinfo_views_b.jsonl").string();
  WriteViews(views, a);
  WriteViews(views, b);
  std::ifstream fa(a), fb(b);
  const std::string ca((std::istreambuf_iterator<char>(fa)), {}), cbytes((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(ca, cbytes);
  EXPECT_EQ(std::count(ca.begin(), ca.end(), '\n'), 2);
  EXPECT_EQ(ReadViews(a), views);
  EXPECT_NE(ca.find("\"smiles\""), std::string::npos);
  EXPECT_NE(ca.find("\"masked_atoms\""), std::string::npos);
  EXPECT_NE(ca.find("\"target_type\":\"atom_type\""), std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Views, MalformedInput) {
  EXPECT_EQ(ThrownCode([] { ViewFromJson("{not json"); }), ErrorCode::kIOFailure);
  EXPECT_EQ(ThrownCode([] { ViewFromJson("{\"smiles\":\"C\"}"); }), ErrorCode::kIOFailure);
  EXPECT_EQ(ThrownCode([] { ReadViews("/nonexistent/views.jsonl"); }), ErrorCode::kIOFailure);
  const auto v = ViewFromJson(
      "{\"smiles\":\"CCO\",\"masked_atoms\":[1],\"target_type\":\"atom_type\",\"targets\":[6],"
      "\"strategy\":\"uniform\",\"seed\":5}");
  EXPECT_EQ(v.plan.kind, PlanKind::kUniform);
  EXPECT_EQ(v.targets, (std::vector<int>{6}));
}

}  // namespace
}  // namespace maskinfo
