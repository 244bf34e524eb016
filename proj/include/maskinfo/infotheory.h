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

#ifndef MASKINFO_INFOTHEORY_H_
#define MASKINFO_INFOTHEORY_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maskinfo/masking.h"

namespace maskinfo {

// One observed (local label x, graph label y) pair.
struct LabelPair {
  std::int64_t x = 0;
  int y = 0;

  bool operator==(const LabelPair&) const = default;
};

// Contingency counts over (X, Y) with binary Y. Marginals are derived on
// demand, so they can never disagree with the cells.
class JointCounts {
 public:
  JointCounts() = default;
  explicit JointCounts(std::string x_space) : x_space_(std::move(x_space)) {}

  void Add(std::int64_t x, int y, std::uint64_t n = 1);
  void Add(const LabelPair& pair) { Add(pair.x, pair.y); }
  void Merge(const JointCounts& other);

  std::uint64_t count(std::int64_t x, int y) const;
  std::uint64_t total() const { return total_; }
  std::uint64_t x_marginal(std::int64_t x) const;
  std::array<std::uint64_t, 2> y_marginal() const { return y_totals_; }
  const std::map<std::int64_t, std::array<std::uint64_t, 2>>& cells() const { return cells_; }
  int distinct_x() const { return static_cast<int>(cells_.size()); }
  const std::string& x_space() const { return x_space_; }
  void set_x_space(std::string s) { x_space_ = std::move(s); }

  bool operator==(const JointCounts& other) const {
    return cells_ == other.cells_ && total_ == other.total_;
  }

 private:
  std::map<std::int64_t, std::array<std::uint64_t, 2>> cells_;
  std::array<std::uint64_t, 2> y_totals_{0, 0};
  std::uint64_t total_ = 0;
  std::string x_space_;
};

JointCounts Accumulate(std::span<const LabelPair> pairs);

// Plug-in estimates in bits (log base 2, 0 log 0 = 0). Throw EmptyCounts
// when total() == 0.
double MutualInformation(const JointCounts& counts);
double EntropyY(const JointCounts& counts);
double EntropyX(const JointCounts& counts);

// P(X | Y=y, S_tau) for the low-frequency labels S_tau = {x : P(x) < tau}.
struct LowFreqConditionals {
  std::vector<std::int64_t> labels;  // S_tau in ascending label order
  std::vector<double> given_y1;
  std::vector<double> given_y0;
};

// Throws InvalidArgument for tau outside (0,1], EmptySupport when either
// class has no mass on S_tau.
LowFreqConditionals LowFreqConditionalsAt(const JointCounts& counts, double tau);

// Jensen-Shannon divergence in bits over a shared support:
// 0.5 KL(p||m) + 0.5 KL(q||m), m = (p+q)/2.
double Jsd(std::span<const double> p, std::span<const double> q);

inline const std::vector<double>& DefaultTauGrid() {
  static const std::vector<double> grid = {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001};
  return grid;
}

struct JsdCurve {
  std::vector<double> thresholds;
  std::vector<std::optional<double>> jsd_values;  // nullopt where undefined
  std::vector<int> kept_label_counts;
};

JsdCurve JsdCurveOf(const JointCounts& counts, std::span<const double> thresholds);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over repeats
  std::vector<double> values;
};

MeanStd Summarize(std::vector<double> values);

// Permutes the x values across all pairs (y stays put) and recomputes MI;
// repeat r uses substream (seed, r).
MeanStd ShuffleControl(std::span<const LabelPair> pairs, std::uint64_t seed, int repeats);

// One labeled graph as seen by the sampling estimator. `inputs` must carry
// whatever the chosen strategy consumes (scores, partition, adjacency).
struct SampleUnit {
  MaskInputs inputs;
  int y = 0;
};

struct SampledMiOptions {
  MaskStrategy strategy = MaskStrategy::kUniform;
  MaskConfig mask;
  int repeats = 5;
  std::uint64_t seed = 0;
  // Off: each graph contributes |V| atom labels taken from successive
  // independent plans (atoms may repeat). On: every atom at most once, which
  // makes the estimate the exact atom-type MI.
  bool without_replacement = false;
  int workers = 1;
};

struct SampledMi {
  MeanStd mi;
  std::uint64_t pairs_per_repeat = 0;
  double h_y = 0.0;
};

// Atom-type MI under a masking strategy. Repeat r, graph g and plan draw d use
// substream (seed, r, g, d), so results do not depend on `workers`. Throws
// EmptyCounts when `units` holds no atoms.
SampledMi SampledMutualInformation(std::span<const SampleUnit> units, const SampledMiOptions& options);

}  // namespace maskinfo

#endif  // MASKINFO_INFOTHEORY_H_
