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

#include "maskinfo/analysis.h"

#include <algorithm>

#include <fmt/format.h>

#include "maskinfo/error.h"
#include "maskinfo/parallel.h"

namespace maskinfo {

std::string RunConfig::Canonical() const {
  std::string s;
  for (const auto& d : datasets) {
    s += fmt::format("dataset={}|{}|{}|{}|{}\n", d.path, d.name, d.smiles_column, fmt::join(d.task_columns, ";"),
                     d.active_task);
  }
  s += fmt::format("fragments={}\n", ingest.fragments == FragmentPolicy::kReject ? "reject" : "largest");
  for (auto t : targets) s += fmt::format("target={}\n", TargetKindName(t));
  for (auto m : strategies) s += fmt::format("strategy={}\n", MaskStrategyName(m));
  s += fmt::format("mask={}|{}|{}|{}|{}\n", mask.ratio, mask.epoch, mask.max_epoch, mask.intra_motif_fraction,
                   beta ? fmt::format("{}", *beta) : "default");
  for (const auto& e : external_scores) s += fmt::format("external={}\n", e);
  s += fmt::format("resources={}|{}|{}|{}|{}\n", resources.vocab_path, resources.codebook_path,
                   resources.embeddings_path, resources.logits_path, resources.l2_normalize);
  s += fmt::format("pagerank={}|{}|{}\n", pagerank.alpha, pagerank.tol, pagerank.max_iter);
  s += fmt::format("taus={}\n", fmt::join(taus, ";"));
  s += fmt::format("repeats={}\nwithout_replacement={}\nseed={}\n", repeats, without_replacement, seed);
  return s;
}

std::string RunConfig::Hash() const { return Fnv1aHex(Canonical()); }

Provenance RunConfig::MakeProvenance() const {
  Provenance p;
  p.seed = seed;
  p.config_hash = Hash();
  return p;
}

std::string SummaryLine(const Corpus& corpus) {
  const auto& s = corpus.summary;
  return fmt::format(
      "dataset={} input_rows={} parsed={} skipped={} (parse_errors={} multi_fragment={}) missing_labels={} "
      "invalid_labels={} singleton_graphs={}",
      corpus.name, s.input_rows, s.parsed, s.skipped(), s.skipped_parse, s.skipped_multi_fragment, s.missing_labels,
      s.invalid_labels, s.singleton_graphs);
}

PreparedDataset Prepare(Corpus corpus, bool with_motifs, const RunConfig& config) {
  PreparedDataset data;
  data.corpus = std::move(corpus);
  for (size_t i = 0; i < data.corpus.records.size(); ++i) {
    const auto& rec = data.corpus.records[i];
    if (rec.label().has_value() && !rec.graph.singleton()) data.analysed.push_back(static_cast<int>(i));
  }
  if (!with_motifs) return data;
  data.partitions.resize(data.analysed.size());
  ParallelFor(data.analysed.size(), config.workers,
              [&](size_t i) { data.partitions[i] = Decompose(data.record(i).graph); });
  if (!config.resources.vocab_path.empty()) {
    data.vocab = MotifVocab::Load(config.resources.vocab_path);
  } else {
    MotifVocab::Builder builder;
    for (const auto& p : data.partitions) builder.Add(p);
    data.vocab = builder.Finish();
  }
  for (auto& p : data.partitions) AssignVocabIds(p, data.vocab);
  return data;
}

PreparedDataset Prepare(const DatasetManifest& manifest, bool with_motifs, const RunConfig& config) {
  return Prepare(Ingest(manifest, config.ingest), with_motifs, config);
}

namespace {

bool NeedsMotifs(std::span<const TargetKind> targets) {
  return std::find(targets.begin(), targets.end(), TargetKind::kMotifLabel) != targets.end();
}

bool NeedsMotifs(std::span<const MaskStrategy> strategies) {
  return std::any_of(strategies.begin(), strategies.end(),
                     [](MaskStrategy m) { return m == MaskStrategy::kMoAMa || m == MaskStrategy::kMotifPred; });
}

void RequireFile(const std::string& path, std::string_view what) {
  if (path.empty()) throw Error(ErrorCode::kInvalidArgument, fmt::format("{} targets need a {} file", what, what == "vq_code" ? "codebook/embeddings" : "logits"));
}

MiRow ExactRow(const std::string& dataset, TargetKind target, const JointCounts& counts) {
  MiRow row;
  row.dataset = dataset;
  row.target_kind = std::string(TargetKindName(target));
  row.strategy = "exact";
  row.mi_bits = MutualInformation(counts);
  row.h_y_bits = EntropyY(counts);
  if (row.mi_bits > row.h_y_bits + 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("MI {} exceeds H(Y) {} for {}", row.mi_bits, row.h_y_bits, dataset));
  }
  row.relative_gain = row.h_y_bits > 0 ? row.mi_bits / row.h_y_bits : 0.0;
  row.n_pairs = counts.total();
  row.seed_mean = row.mi_bits;
  row.seed_std = 0.0;
  return row;
}

std::vector<PreparedDataset> PrepareAll(const RunConfig& config, bool with_motifs, AnalysisReport& report) {
  if (config.datasets.empty()) throw Error(ErrorCode::kInvalidArgument, "no datasets configured");
  std::vector<PreparedDataset> out;
  for (const auto& m : config.datasets) {
    out.push_back(Prepare(m, with_motifs, config));
    report.notes.push_back(SummaryLine(out.back().corpus));
  }
  return out;
}

}  // namespace

std::vector<LabelPair> CollectPairs(const PreparedDataset& data, TargetKind target, const RunConfig& config) {
  const size_t n = data.analysed.size();
  std::vector<std::vector<LabelPair>> per_graph(n);
  EmbeddingTable table;
  Matrix codebook;
  if (target == TargetKind::kVqCode) {
    RequireFile(config.resources.codebook_path, "vq_code");
    RequireFile(config.resources.embeddings_path, "vq_code");
    codebook = LoadCodebook(config.resources.codebook_path);
    table = LoadEmbeddings(config.resources.embeddings_path);
    if (table.dim() != codebook.cols) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("embedding dim {} does not match codebook dim {}", table.dim(), codebook.cols));
    }
  } else if (target == TargetKind::kArgmaxToken) {
    RequireFile(config.resources.logits_path, "argmax_token");
    table = LoadEmbeddings(config.resources.logits_path);
  } else if (target == TargetKind::kMotifLabel && data.partitions.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "motif targets need a dataset prepared with motifs");
  }
  ParallelFor(n, config.workers, [&](size_t i) {
    const LabeledRecord& rec = data.record(i);
    const int y = data.label(i);
    auto& pairs = per_graph[i];
    switch (target) {
      case TargetKind::kAtomType:
        for (const auto& a : rec.graph.atoms()) pairs.push_back({a.atomic_number, y});
        break;
      case TargetKind::kMotifLabel:
        for (const auto& id : data.partitions[i].vocab_ids) {
          if (id) pairs.push_back({*id, y});
        }
        break;
      case TargetKind::kArgmaxToken: {
        const Matrix m = table.ForGraph(rec.row, rec.graph.num_atoms());
        for (int a = 0; a < m.rows; ++a) pairs.push_back({ArgmaxIndex(m.row(a)), y});
        break;
      }
      case TargetKind::kVqCode: {
        const Matrix m = table.ForGraph(rec.row, rec.graph.num_atoms());
        for (int a = 0; a < m.rows; ++a) {
          pairs.push_back({NearestCode(m.row(a), codebook, config.resources.l2_normalize), y});
        }
        break;
      }
    }
  });
  std::vector<LabelPair> all;
  for (auto& p : per_graph) all.insert(all.end(), p.begin(), p.end());
  return all;
}

AnalysisReport RunMiAnalysis(const RunConfig& config) {
  AnalysisReport report;
  report.kind = ReportKind::kMi;
  report.provenance = config.MakeProvenance();
  for (const auto& data : PrepareAll(config, NeedsMotifs(config.targets), report)) {
    for (auto t : config.targets) {
      const auto pairs = CollectPairs(data, t, config);
      report.mi_rows.push_back(ExactRow(data.corpus.name, t, Accumulate(pairs)));
    }
  }
  SortRows(report);
  return report;
}

AnalysisReport RunJsdAnalysis(const RunConfig& config) {
  AnalysisReport report;
  report.kind = ReportKind::kJsd;
  report.provenance = config.MakeProvenance();
  for (const auto& data : PrepareAll(config, NeedsMotifs(config.targets), report)) {
    for (auto t : config.targets) {
      const auto pairs = CollectPairs(data, t, config);
      const auto curve = JsdCurveOf(Accumulate(pairs), config.taus);
      for (size_t k = 0; k < curve.thresholds.size(); ++k) {
        report.jsd_rows.push_back({data.corpus.name, std::string(TargetKindName(t)), curve.thresholds[k],
                                   curve.jsd_values[k], curve.kept_label_counts[k]});
      }
    }
  }
  SortRows(report);
  return report;
}

AnalysisReport RunMaskSim(const RunConfig& config) {
  AnalysisReport report;
  report.kind = ReportKind::kMi;
  report.provenance = config.MakeProvenance();
  const bool uses_external = std::find(config.strategies.begin(), config.strategies.end(), MaskStrategy::kExternal) !=
                             config.strategies.end();
  if (uses_external && config.external_scores.size() != config.datasets.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("external strategy needs one score file per dataset ({} given for {} datasets)",
                            config.external_scores.size(), config.datasets.size()));
  }
  auto prepared = PrepareAll(config, NeedsMotifs(config.strategies), report);
  for (size_t d = 0; d < prepared.size(); ++d) {
    const PreparedDataset& data = prepared[d];
    const size_t n = data.analysed.size();
    report.mi_rows.push_back(
        ExactRow(data.corpus.name, TargetKind::kAtomType, Accumulate(CollectPairs(data, TargetKind::kAtomType, config))));

    std::vector<std::vector<std::vector<int>>> adjacency(data.partitions.size());
    ParallelFor(data.partitions.size(), config.workers,
                [&](size_t i) { adjacency[i] = MotifAdjacency(data.record(i).graph, data.partitions[i]); });
    std::vector<NodeScores> pagerank(n), external;
    if (std::find(config.strategies.begin(), config.strategies.end(), MaskStrategy::kPageRank) !=
        config.strategies.end()) {
      ParallelFor(n, config.workers, [&](size_t i) { pagerank[i] = PageRank(data.record(i).graph, config.pagerank); });
    }
    if (uses_external) {
      std::vector<int> atom_counts;
      for (const auto& rec : data.corpus.records) atom_counts.push_back(rec.graph.num_atoms());
      auto all = LoadExternalScores(config.external_scores[d], atom_counts);
      for (int idx : data.analysed) external.push_back(std::move(all[static_cast<size_t>(idx)]));
    }

    for (auto strategy : config.strategies) {
      std::vector<SampleUnit> units(n);
      for (size_t i = 0; i < n; ++i) {
        units[i].y = data.label(i);
        units[i].inputs.graph = &data.record(i).graph;
        if (!data.partitions.empty()) {
          units[i].inputs.partition = &data.partitions[i];
          units[i].inputs.motif_adjacency = &adjacency[i];
        }
        if (strategy == MaskStrategy::kPageRank) units[i].inputs.scores = &pagerank[i];
        if (strategy == MaskStrategy::kExternal) units[i].inputs.scores = &external[i];
      }
      SampledMiOptions opt;
      opt.strategy = strategy;
      opt.mask = config.mask;
      if (strategy == MaskStrategy::kPageRank || strategy == MaskStrategy::kExternal) {
        opt.mask.beta = config.beta.value_or(
            DefaultBeta(strategy == MaskStrategy::kPageRank ? ScoreSource::kPageRank : ScoreSource::kExternal));
      }
      opt.repeats = config.repeats;
      opt.seed = config.seed;
      opt.without_replacement = config.without_replacement;
      opt.workers = config.workers;
      const SampledMi s = SampledMutualInformation(units, opt);
      MiRow row;
      row.dataset = data.corpus.name;
      row.target_kind = std::string(TargetKindName(TargetKind::kAtomType));
      row.strategy = std::string(MaskStrategyName(strategy));
      row.mi_bits = s.mi.mean;
      row.h_y_bits = s.h_y;
      row.relative_gain = s.h_y > 0 ? s.mi.mean / s.h_y : 0.0;
      row.n_pairs = s.pairs_per_repeat;
      row.seed_mean = s.mi.mean;
      row.seed_std = s.mi.std;
      report.mi_rows.push_back(row);
    }
  }
  SortRows(report);
  return report;
}

AnalysisReport RunShuffleControl(const RunConfig& config) {
  AnalysisReport report;
  report.kind = ReportKind::kMi;
  report.provenance = config.MakeProvenance();
  for (const auto& data : PrepareAll(config, NeedsMotifs(config.targets), report)) {
    for (auto t : config.targets) {
      const auto pairs = CollectPairs(data, t, config);
      const MiRow exact = ExactRow(data.corpus.name, t, Accumulate(pairs));
      report.mi_rows.push_back(exact);
      const MeanStd shuffled = ShuffleControl(pairs, config.seed, config.repeats);
      MiRow row = exact;
      row.strategy = "shuffled";
      row.mi_bits = shuffled.mean;
      row.relative_gain = row.h_y_bits > 0 ? row.mi_bits / row.h_y_bits : 0.0;
      row.seed_mean = shuffled.mean;
      row.seed_std = shuffled.std;
      report.mi_rows.push_back(row);
    }
  }
  SortRows(report);
  return report;
}

}  // namespace maskinfo
