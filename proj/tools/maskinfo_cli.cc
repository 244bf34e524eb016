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

// maskinfo command-line front end.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "maskinfo/analysis.h"
#include "maskinfo/csv.h"
#include "maskinfo/error.h"
#include "maskinfo/parallel.h"
#include "maskinfo/views.h"

namespace mi = maskinfo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = ".";
};

struct DataArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> names;
  std::string smiles_column = "smiles";
  std::vector<std::string> task_columns;
  std::string task;
  bool largest_fragment = false;

  void Register(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("-i,--input", inputs, "Dataset CSV (repeatable)");
    if (required) opt->required();
    app->add_option("--name", names, "Dataset tag per input (default: file stem)");
    app->add_option("--smiles-column", smiles_column, "SMILES column name")->capture_default_str();
    app->add_option("--task-columns", task_columns, "Label columns (default: all but SMILES)")->delimiter(',');
    app->add_option("--task", task, "Active label column (default: first task column)");
    app->add_flag("--largest-fragment", largest_fragment, "Keep the largest fragment of multi-fragment rows");
  }

  std::vector<mi::DatasetManifest> Manifests() const {
    if (!names.empty() && names.size() != inputs.size()) throw UsageError("--name must be given once per --input");
    std::vector<mi::DatasetManifest> out;
    for (size_t i = 0; i < inputs.size(); ++i) {
      mi::DatasetManifest m;
      m.path = inputs[i];
      m.name = names.empty() ? mi::DefaultDatasetName(inputs[i]) : names[i];
      m.smiles_column = smiles_column;
      m.task_columns = task_columns;
      m.active_task = task;
      out.push_back(m);
    }
    return out;
  }

  mi::IngestOptions Ingest() const {
    mi::IngestOptions o;
    o.fragments = largest_fragment ? mi::FragmentPolicy::kLargest : mi::FragmentPolicy::kReject;
    return o;
  }
};

struct TargetArgs {
  std::vector<std::string> targets;
  mi::TargetResources resources;

  void Register(CLI::App* app, std::vector<std::string> defaults) {
    targets = std::move(defaults);
    app->add_option("--targets", targets, "atom_type, motif_label, argmax_token, vq_code")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--vocab", resources.vocab_path, "Motif vocabulary TSV (default: built from the input)");
    app->add_option("--codebook", resources.codebook_path, "VQ codebook CSV");
    app->add_option("--embeddings", resources.embeddings_path, "Per-atom embedding CSV for vq_code");
    app->add_option("--logits", resources.logits_path, "Per-atom logits CSV for argmax_token");
    app->add_flag("--l2-normalize", resources.l2_normalize, "L2-normalize embeddings and codes before VQ");
  }

  std::vector<mi::TargetKind> Kinds() const {
    std::vector<mi::TargetKind> out;
    for (const auto& t : targets) {
      auto k = mi::ParseTargetKind(t);
      if (!k) throw UsageError("unknown target '" + t + "'");
      out.push_back(*k);
    }
    return out;
  }
};

struct MaskArgs {
  std::vector<std::string> strategies;
  std::vector<std::string> external_scores;
  double ratio = 0.25;
  int epoch = 1;
  int max_epoch = 1;
  std::optional<double> beta;
  double intra_motif_fraction = 0.5;

  void Register(CLI::App* app, double default_ratio, std::vector<std::string> default_strategies) {
    ratio = default_ratio;
    strategies = std::move(default_strategies);
    app->add_option("--strategy,--strategies", strategies, "uniform, pagerank, external, moama, motifpred")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--external-scores", external_scores, "Per-atom score CSV per dataset");
    app->add_option("--ratio", ratio, "Mask ratio gamma")->capture_default_str();
    app->add_option("--epoch", epoch, "Current epoch i for annealing")->capture_default_str();
    app->add_option("--max-epoch", max_epoch, "Total epochs E for annealing")->capture_default_str();
    app->add_option("--beta", beta, "Perturbation strength (default: per score source)");
    app->add_option("--intra-frac,--intra-motif-fraction", intra_motif_fraction, "Share of each motif masked by motifpred")
        ->capture_default_str();
  }

  std::vector<mi::MaskStrategy> Kinds() const {
    std::vector<mi::MaskStrategy> out;
    for (const auto& s : strategies) {
      auto k = mi::ParseMaskStrategy(s);
      if (!k) throw UsageError("unknown strategy '" + s + "'");
      out.push_back(*k);
    }
    return out;
  }

  mi::MaskConfig Config(std::uint64_t seed) const {
    mi::MaskConfig c;
    c.ratio = ratio;
    c.epoch = epoch;
    c.max_epoch = max_epoch;
    c.beta = beta.value_or(c.beta);
    c.intra_motif_fraction = intra_motif_fraction;
    c.seed = seed;
    c.Validate();
    return c;
  }
};

std::string OutPath(const Globals& g, const std::string& file) {
  std::filesystem::create_directories(g.out_dir);
  return (std::filesystem::path(g.out_dir) / file).string();
}

// Explicit -o paths get their parent directory created like --out-dir does.
std::string ExplicitOrDefault(const Globals& g, const std::string& explicit_path, const std::string& file) {
  if (explicit_path.empty()) return OutPath(g, file);
  const auto parent = std::filesystem::path(explicit_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  return explicit_path;
}

void EmitReport(const Globals& g, const mi::AnalysisReport& report, const std::string& file) {
  for (const auto& note : report.notes) std::cerr << note << '\n';
  const std::string path = OutPath(g, file);
  mi::WriteFile(path, mi::ReportToCsv(report));
  std::cout << "wrote " << path << " (" << (report.kind == mi::ReportKind::kMi ? report.mi_rows.size() : report.jsd_rows.size())
            << " rows)\n";
}

mi::RunConfig BaseConfig(const Globals& g, const DataArgs& data) {
  mi::RunConfig c;
  c.datasets = data.Manifests();
  c.ingest = data.Ingest();
  c.seed = g.seed;
  c.workers = g.workers;
  c.out_dir = g.out_dir;
  return c;
}

mi::Corpus IngestOne(const mi::DatasetManifest& m, const mi::IngestOptions& o) { return mi::Ingest(m, o); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maskinfo: information analysis of masked graph pretraining targets"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();

  // parse-check
  auto* parse_check = app.add_subcommand("parse-check", "Ingest CSVs and report parse and label accounting");
  DataArgs pc_data;
  pc_data.Register(parse_check);
  bool pc_list = false;
  parse_check->add_flag("--list-failures", pc_list, "Print each skipped row");

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Split molecules into motifs");
  DataArgs dc_data;
  dc_data.Register(decompose, false);
  std::vector<std::string> dc_smiles;
  decompose->add_option("--smiles", dc_smiles, "SMILES to decompose (repeatable)");

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Motif vocabulary tools");
  vocab->require_subcommand(1);
  auto* vocab_build = vocab->add_subcommand("build", "Build a vocabulary from corpora");
  DataArgs vb_data;
  vb_data.Register(vocab_build);
  std::string vb_output;
  vocab_build->add_option("-o,--output", vb_output, "Vocabulary TSV (default: <out-dir>/vocab.tsv)");
  auto* vocab_cov = vocab->add_subcommand("coverage", "Coverage of downstream corpora by a vocabulary");
  DataArgs vc_data;
  vc_data.Register(vocab_cov);
  std::string vc_vocab;
  vocab_cov->add_option("--vocab", vc_vocab, "Pretraining vocabulary TSV")->required();

  // mi / jsd / shuffle-control / mask-sim
  auto* mi_cmd = app.add_subcommand("mi", "Exact MI between local labels and the graph label");
  DataArgs mi_data;
  mi_data.Register(mi_cmd);
  TargetArgs mi_targets;
  mi_targets.Register(mi_cmd, {"atom_type", "motif_label"});

  auto* jsd_cmd = app.add_subcommand("jsd", "JSD curves of low-frequency class conditionals");
  DataArgs jsd_data;
  jsd_data.Register(jsd_cmd);
  TargetArgs jsd_targets;
  jsd_targets.Register(jsd_cmd, {"atom_type", "motif_label"});
  std::vector<double> taus = mi::DefaultTauGrid();
  jsd_cmd->add_option("--taus", taus, "Frequency thresholds")->delimiter(',')->capture_default_str();

  auto* shuffle_cmd = app.add_subcommand("shuffle-control", "MI after permuting local labels across units");
  DataArgs sh_data;
  sh_data.Register(shuffle_cmd);
  TargetArgs sh_targets;
  sh_targets.Register(shuffle_cmd, {"motif_label"});
  int sh_repeats = 5;
  shuffle_cmd->add_option("--repeats", sh_repeats, "Permutation seeds")->check(CLI::PositiveNumber)->capture_default_str();

  auto* sim_cmd = app.add_subcommand("mask-sim", "Sampled atom-type MI under masking strategies");
  DataArgs sim_data;
  sim_data.Register(sim_cmd);
  MaskArgs sim_mask;
  sim_mask.Register(sim_cmd, 0.25, {"uniform", "pagerank"});
  int sim_repeats = 5;
  bool sim_without = false;
  sim_cmd->add_option("--repeats", sim_repeats, "Seeded repeats")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_flag("--without-replacement", sim_without, "Take each atom at most once per graph");

  // export-views
  auto* export_cmd = app.add_subcommand("export-views", "Write masked views as JSON lines");
  DataArgs ex_data;
  ex_data.Register(export_cmd);
  MaskArgs ex_mask;
  ex_mask.Register(export_cmd, 0.15, {"uniform"});
  TargetArgs ex_targets;
  ex_targets.Register(export_cmd, {"atom_type"});
  int ex_draws = 1;
  std::string ex_output;
  export_cmd->add_option("--draws-per-graph,--draws", ex_draws, "Views per graph")->check(CLI::PositiveNumber)->capture_default_str();
  export_cmd->add_option("-o,--output", ex_output, "JSONL path (default: <out-dir>/views.jsonl)");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render an MI or JSD report CSV as SVG");
  std::string plot_report, plot_output;
  plot_cmd->add_option("--report", plot_report, "Report CSV")->required();
  plot_cmd->add_option("-o,--output", plot_output, "SVG path (default: <out-dir>/<report stem>.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse_check->parsed()) {
      for (const auto& m : pc_data.Manifests()) {
        const auto corpus = IngestOne(m, pc_data.Ingest());
        std::cout << mi::SummaryLine(corpus) << '\n';
        if (pc_list) {
          std::vector<bool> seen(static_cast<size_t>(corpus.summary.input_rows), false);
          for (const auto& r : corpus.records) seen[static_cast<size_t>(r.row)] = true;
          for (size_t r = 0; r < seen.size(); ++r) {
            if (!seen[r]) std::cout << "  skipped data row " << r << '\n';
          }
        }
      }
    } else if (decompose->parsed()) {
      if (dc_smiles.empty() && dc_data.inputs.empty()) throw UsageError("decompose needs --smiles or --input");
      for (const auto& s : dc_smiles) {
        const auto graph = mi::ParseSmiles(s);
        const auto part = mi::Decompose(graph);
        std::cout << s << '\t' << part.size();
        for (size_t k = 0; k < part.motifs.size(); ++k) {
          std::cout << '\t' << fmt::format("{}", fmt::join(part.motifs[k], " ")) << ':' << part.signatures[k];
        }
        std::cout << '\n';
      }
      for (const auto& m : dc_data.Manifests()) {
        const auto corpus = IngestOne(m, dc_data.Ingest());
        std::cerr << mi::SummaryLine(corpus) << '\n';
        std::string out = mi::CsvLine({"dataset", "row", "smiles", "n_motifs", "signatures"});
        for (const auto& rec : corpus.records) {
          const auto part = mi::Decompose(rec.graph);
          out += mi::CsvLine({corpus.name, std::to_string(rec.row), rec.graph.source_smiles(),
                              std::to_string(part.size()), fmt::format("{}", fmt::join(part.signatures, ";"))});
        }
        const std::string path = OutPath(g, corpus.name + "_motifs.csv");
        mi::WriteFile(path, out);
        std::cout << "wrote " << path << '\n';
      }
    } else if (vocab_build->parsed()) {
      mi::MotifVocab::Builder builder;
      for (const auto& m : vb_data.Manifests()) {
        const auto corpus = IngestOne(m, vb_data.Ingest());
        std::cerr << mi::SummaryLine(corpus) << '\n';
        std::vector<mi::MotifPartition> parts(corpus.records.size());
        mi::ParallelFor(parts.size(), g.workers, [&](size_t i) { parts[i] = mi::Decompose(corpus.records[i].graph); });
        for (const auto& p : parts) builder.Add(p);
      }
      const auto v = builder.Finish();
      const std::string path = ExplicitOrDefault(g, vb_output, "vocab.tsv");
      v.Save(path);
      std::cout << "wrote " << path << " (" << v.size() << " motifs)\n";
    } else if (vocab_cov->parsed()) {
      const auto v = mi::MotifVocab::Load(vc_vocab);
      std::string summary =
          mi::CsvLine({"dataset", "overlap_ratio", "mean_r", "median_r", "pct_r_ge_080", "pct_r_le_020"});
      std::string per_graph = mi::CsvLine({"dataset", "row", "r"});
      for (const auto& m : vc_data.Manifests()) {
        const auto corpus = IngestOne(m, vc_data.Ingest());
        std::cerr << mi::SummaryLine(corpus) << '\n';
        std::vector<mi::MotifPartition> parts(corpus.records.size());
        mi::ParallelFor(parts.size(), g.workers, [&](size_t i) { parts[i] = mi::Decompose(corpus.records[i].graph); });
        const auto cov = mi::Coverage(v, parts);
        summary += mi::CsvLine({corpus.name, mi::FormatBits(cov.overlap_ratio), mi::FormatBits(cov.mean_r),
                                mi::FormatBits(cov.median_r), mi::FormatBits(cov.pct_r_ge_080),
                                mi::FormatBits(cov.pct_r_le_020)});
        std::cout << fmt::format("dataset={} downstream_vocab={} shared={} overlap_ratio={} mean_r={}\n", corpus.name,
                                 cov.downstream_vocab_size, cov.intersection_size, mi::FormatBits(cov.overlap_ratio),
                                 mi::FormatBits(cov.mean_r));
        for (size_t i = 0; i < cov.per_graph_r.size(); ++i) {
          per_graph += mi::CsvLine({corpus.name, std::to_string(corpus.records[i].row), mi::FormatBits(cov.per_graph_r[i])});
        }
      }
      for (const auto& [file, bytes] : {std::pair{"coverage.csv", &summary}, std::pair{"coverage_per_graph.csv", &per_graph}}) {
        const std::string path = OutPath(g, file);
        mi::WriteFile(path, *bytes);
        std::cout << "wrote " << path << '\n';
      }
    } else if (mi_cmd->parsed()) {
      auto c = BaseConfig(g, mi_data);
      c.targets = mi_targets.Kinds();
      c.resources = mi_targets.resources;
      EmitReport(g, mi::RunMiAnalysis(c), "mi.csv");
    } else if (jsd_cmd->parsed()) {
      auto c = BaseConfig(g, jsd_data);
      c.targets = jsd_targets.Kinds();
      c.resources = jsd_targets.resources;
      for (double t : taus) {
        if (!(t > 0 && t <= 1)) throw UsageError("tau values must lie in (0,1]");
      }
      c.taus = taus;
      EmitReport(g, mi::RunJsdAnalysis(c), "jsd.csv");
    } else if (shuffle_cmd->parsed()) {
      auto c = BaseConfig(g, sh_data);
      c.targets = sh_targets.Kinds();
      c.resources = sh_targets.resources;
      c.repeats = sh_repeats;
      EmitReport(g, mi::RunShuffleControl(c), "shuffle_control.csv");
    } else if (sim_cmd->parsed()) {
      auto c = BaseConfig(g, sim_data);
      c.strategies = sim_mask.Kinds();
      c.mask = sim_mask.Config(g.seed);
      c.beta = sim_mask.beta;
      c.external_scores = sim_mask.external_scores;
      c.repeats = sim_repeats;
      c.without_replacement = sim_without;
      EmitReport(g, mi::RunMaskSim(c), "mask_sim.csv");
    } else if (export_cmd->parsed()) {
      const auto strategies = ex_mask.Kinds();
      const auto targets = ex_targets.Kinds();
      if (strategies.size() != 1 || targets.size() != 1) throw UsageError("export-views takes one strategy and one target");
      const auto strategy = strategies[0];
      const auto target = targets[0];
      const auto manifests = ex_data.Manifests();
      if (strategy == mi::MaskStrategy::kExternal && ex_mask.external_scores.size() != manifests.size()) {
        throw UsageError("external strategy needs one --external-scores file per --input");
      }
      mi::MaskConfig mc = ex_mask.Config(g.seed);
      std::vector<mi::ViewRecord> views;
      for (size_t d = 0; d < manifests.size(); ++d) {
        const auto corpus = IngestOne(manifests[d], ex_data.Ingest());
        std::cerr << mi::SummaryLine(corpus) << '\n';
        const size_t n = corpus.records.size();
        std::vector<mi::MotifPartition> parts(n);
        std::vector<std::vector<std::vector<int>>> adj(n);
        mi::ParallelFor(n, g.workers, [&](size_t i) {
          parts[i] = mi::Decompose(corpus.records[i].graph);
          adj[i] = mi::MotifAdjacency(corpus.records[i].graph, parts[i]);
        });
        mi::MotifVocab vocab;
        if (target == mi::TargetKind::kMotifLabel) {
          if (!ex_targets.resources.vocab_path.empty()) {
            vocab = mi::MotifVocab::Load(ex_targets.resources.vocab_path);
          } else {
            mi::MotifVocab::Builder b;
            for (const auto& p : parts) b.Add(p);
            vocab = b.Finish();
          }
        }
        std::vector<mi::NodeScores> scores(n);
        if (strategy == mi::MaskStrategy::kPageRank) {
          mi::ParallelFor(n, g.workers, [&](size_t i) { scores[i] = mi::PageRank(corpus.records[i].graph); });
          mc.beta = ex_mask.beta.value_or(mi::DefaultBeta(mi::ScoreSource::kPageRank));
        } else if (strategy == mi::MaskStrategy::kExternal) {
          std::vector<int> counts;
          for (const auto& r : corpus.records) counts.push_back(r.graph.num_atoms());
          scores = mi::LoadExternalScores(ex_mask.external_scores[d], counts);
          mc.beta = ex_mask.beta.value_or(mi::DefaultBeta(mi::ScoreSource::kExternal));
        }
        mi::EmbeddingTable table;
        mi::Matrix codebook;
        if (target == mi::TargetKind::kVqCode) {
          codebook = mi::LoadCodebook(ex_targets.resources.codebook_path);
          table = mi::LoadEmbeddings(ex_targets.resources.embeddings_path);
        } else if (target == mi::TargetKind::kArgmaxToken) {
          table = mi::LoadEmbeddings(ex_targets.resources.logits_path);
        }
        std::vector<std::vector<mi::ViewRecord>> per_graph(n);
        mi::ParallelFor(n, g.workers, [&](size_t i) {
          const auto& rec = corpus.records[i];
          mi::MaskInputs in{&rec.graph, &parts[i], &adj[i], &scores[i]};
          for (int draw = 0; draw < ex_draws; ++draw) {
            const std::uint64_t sub = mi::SubstreamSeed(g.seed, {d, i, static_cast<std::uint64_t>(draw)});
            mi::Rng rng(sub);
            mi::ViewRecord v;
            v.graph_index = rec.row;
            v.draw = draw;
            v.smiles = rec.graph.source_smiles();
            v.strategy = std::string(mi::MaskStrategyName(strategy));
            v.plan = mi::DrawPlan(strategy, in, mc, rng);
            v.target_type = target;
            v.seed = sub;
            mi::TargetAssignment t;
            switch (target) {
              case mi::TargetKind::kAtomType: t = mi::AtomTypeTargets(rec.graph, v.plan); break;
              case mi::TargetKind::kMotifLabel: t = mi::MotifTargets(parts[i], v.plan, vocab); break;
              case mi::TargetKind::kVqCode:
                t = mi::VqTargets(v.plan, table.ForGraph(rec.row, rec.graph.num_atoms()), codebook,
                                  ex_targets.resources.l2_normalize);
                break;
              case mi::TargetKind::kArgmaxToken:
                t = mi::ArgmaxTargets(v.plan, table.ForGraph(rec.row, rec.graph.num_atoms()));
                break;
            }
            v.targets = t.labels;
            per_graph[i].push_back(std::move(v));
          }
        });
        for (auto& pg : per_graph) {
          for (auto& v : pg) views.push_back(std::move(v));
        }
      }
      const std::string path = ExplicitOrDefault(g, ex_output, "views.jsonl");
      mi::WriteViews(views, path);
      std::cout << "wrote " << path << " (" << views.size() << " views)\n";
    } else if (plot_cmd->parsed()) {
      const auto report = mi::ReportFromCsv(mi::ReadFile(plot_report));
      const std::string path =
          ExplicitOrDefault(g, plot_output, std::filesystem::path(plot_report).stem().string() + ".svg");
      mi::WriteFile(path, mi::RenderSvg(report));
      std::cout << "wrote " << path << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == mi::ErrorCode::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
