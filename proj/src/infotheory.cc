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

#include "maskinfo/infotheory.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maskinfo/error.h"
#include "maskinfo/parallel.h"
#include "maskinfo/random.h"

namespace maskinfo {

void JointCounts::Add(std::int64_t x, int y, std::uint64_t n) {
  if (y != 0 && y != 1) throw Error(ErrorCode::kInvalidArgument, "graph label must be 0 or 1");
  if (n == 0) return;
  cells_[x][static_cast<size_t>(y)] += n;
  y_totals_[static_cast<size_t>(y)] += n;
  total_ += n;
}

void JointCounts::Merge(const JointCounts& other) {
  for (const auto& [x, row] : other.cells_) {
    for (int y = 0; y < 2; ++y) Add(x, y, row[static_cast<size_t>(y)]);
  }
  if (x_space_.empty()) x_space_ = other.x_space_;
}

std::uint64_t JointCounts::count(std::int64_t x, int y) const {
  auto it = cells_.find(x);
  return it == cells_.end() ? 0 : it->second[static_cast<size_t>(y)];
}

std::uint64_t JointCounts::x_marginal(std::int64_t x) const {
  auto it = cells_.find(x);
  return it == cells_.end() ? 0 : it->second[0] + it->second[1];
}

JointCounts Accumulate(std::span<const LabelPair> pairs) {
  JointCounts counts;
  for (const auto& p : pairs) counts.Add(p);
  return counts;
}

namespace {

void RequireNonEmpty(const JointCounts& counts) {
  if (counts.total() == 0) throw Error(ErrorCode::kEmptyCounts, "no (x, y) pairs were counted");
}

double PLogP(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

double MutualInformation(const JointCounts& counts) {
  RequireNonEmpty(counts);
  const double n = static_cast<double>(counts.total());
  const auto ym = counts.y_marginal();
  const double py[2] = {static_cast<double>(ym[0]) / n, static_cast<double>(ym[1]) / n};
  double mi = 0.0;
  for (const auto& [x, row] : counts.cells()) {
    const double px = static_cast<double>(row[0] + row[1]) / n;
    for (int y = 0; y < 2; ++y) {
      const auto c = row[static_cast<size_t>(y)];
      if (c == 0) continue;
      const double pxy = static_cast<double>(c) / n;
      mi += pxy * std::log2(pxy / (px * py[y]));
    }
  }
  // Rounding can leave a tiny negative value for independent tables.
  return std::max(mi, 0.0);
}

double EntropyY(const JointCounts& counts) {
  RequireNonEmpty(counts);
  const double n = static_cast<double>(counts.total());
  const auto ym = counts.y_marginal();
  return -(PLogP(static_cast<double>(ym[0]) / n) + PLogP(static_cast<double>(ym[1]) / n));
}

double EntropyX(const JointCounts& counts) {
  RequireNonEmpty(counts);
  const double n = static_cast<double>(counts.total());
  double h = 0.0;
  for (const auto& [x, row] : counts.cells()) h -= PLogP(static_cast<double>(row[0] + row[1]) / n);
  return h;
}

LowFreqConditionals LowFreqConditionalsAt(const JointCounts& counts, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "tau must lie in (0,1]");
  RequireNonEmpty(counts);
  const double n = static_cast<double>(counts.total());
  LowFreqConditionals out;
  std::uint64_t mass[2] = {0, 0};
  for (const auto& [x, row] : counts.cells()) {
    const double px = static_cast<double>(row[0] + row[1]) / n;
    if (px < tau) {
      out.labels.push_back(x);
      mass[0] += row[0];
      mass[1] += row[1];
    }
  }
  if (mass[0] == 0 || mass[1] == 0) {
    throw Error(ErrorCode::kEmptySupport, "no low-frequency labels with mass under both classes at tau=" +
                                              std::to_string(tau));
  }
  for (auto x : out.labels) {
    out.given_y1.push_back(static_cast<double>(counts.count(x, 1)) / static_cast<double>(mass[1]));
    out.given_y0.push_back(static_cast<double>(counts.count(x, 0)) / static_cast<double>(mass[0]));
  }
  return out;
}

double Jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::kShapeMismatch, "JSD inputs must share a support");
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    const double a = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
    const double b = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
    d += 0.5 * (a + b);  // a + b keeps Jsd(p, q) == Jsd(q, p) bit for bit
  }
  return std::clamp(d, 0.0, 1.0);
}

JsdCurve JsdCurveOf(const JointCounts& counts, std::span<const double> thresholds) {
  JsdCurve curve;
  const double n = static_cast<double>(counts.total());
  for (double tau : thresholds) {
    curve.thresholds.push_back(tau);
    int kept = 0;
    if (n > 0) {
      for (const auto& [x, row] : counts.cells()) {
        if (static_cast<double>(row[0] + row[1]) / n < tau) ++kept;
      }
    }
    curve.kept_label_counts.push_back(kept);
    try {
      const auto cond = LowFreqConditionalsAt(counts, tau);
      curve.jsd_values.emplace_back(Jsd(cond.given_y1, cond.given_y0));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptySupport && e.code() != ErrorCode::kEmptyCounts) throw;
      curve.jsd_values.emplace_back(std::nullopt);
    }
  }
  return curve;
}

MeanStd Summarize(std::vector<double> values) {
  MeanStd out;
  if (!values.empty()) {
    const double k = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / k);
  }
  out.values = std::move(values);
  return out;
}

MeanStd ShuffleControl(std::span<const LabelPair> pairs, std::uint64_t seed, int repeats) {
  if (repeats < 1) throw Error(ErrorCode::kInvalidArgument, "shuffle control needs repeats >= 1");
  std::vector<std::int64_t> xs;
  xs.reserve(pairs.size());
  for (const auto& p : pairs) xs.push_back(p.x);
  std::vector<double> mis;
  for (int r = 0; r < repeats; ++r) {
    std::vector<std::int64_t> permuted = xs;
    Rng rng = MakeRng(seed, {0x5u, static_cast<std::uint64_t>(r)});
    std::shuffle(permuted.begin(), permuted.end(), rng);
    JointCounts counts;
    for (size_t i = 0; i < pairs.size(); ++i) counts.Add(permuted[i], pairs[i].y);
    mis.push_back(MutualInformation(counts));
  }
  return Summarize(std::move(mis));
}

SampledMi SampledMutualInformation(std::span<const SampleUnit> units, const SampledMiOptions& options) {
  if (options.repeats < 1) throw Error(ErrorCode::kInvalidArgument, "sampled MI needs repeats >= 1");
  options.mask.Validate();
  SampledMi out;
  std::vector<double> mis;
  for (int r = 0; r < options.repeats; ++r) {
    std::vector<JointCounts> per_graph(units.size());
    ParallelFor(units.size(), options.workers, [&](std::size_t g) {
      const SampleUnit& unit = units[g];
      const MolGraph& graph = *unit.inputs.graph;
      const int n = graph.num_atoms();
      JointCounts& counts = per_graph[g];
      if (options.without_replacement) {
        for (const auto& atom : graph.atoms()) counts.Add(atom.atomic_number, unit.y);
        return;
      }
      int collected = 0;
      for (std::uint64_t d = 0; collected < n; ++d) {
        Rng rng = MakeRng(options.seed, {static_cast<std::uint64_t>(r), g, d});
        MaskPlan plan = DrawPlan(options.strategy, unit.inputs, options.mask, rng);
        std::shuffle(plan.masked_atoms.begin(), plan.masked_atoms.end(), rng);
        for (int a : plan.masked_atoms) {
          if (collected == n) break;
          counts.Add(graph.atom(a).atomic_number, unit.y);
          ++collected;
        }
      }
    });
    JointCounts total;
    for (const auto& c : per_graph) total.Merge(c);
    mis.push_back(MutualInformation(total));
    if (r == 0) {
      out.pairs_per_repeat = total.total();
      out.h_y = EntropyY(total);
    }
  }
  out.mi = Summarize(std::move(mis));
  return out;
}

}  // namespace maskinfo
