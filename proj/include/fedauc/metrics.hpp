// Copyright 2026 The fedauc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Exact (non-private) AUC computation by threshold sweep, by the rank
// formula, and by the pairwise reference, plus the ROC construction shared
// with the noisy protocols.

#ifndef FEDAUC_METRICS_HPP
#define FEDAUC_METRICS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "fedauc/dataset.hpp"

namespace fedauc {

// Confusion counts at one threshold. Real-valued so the exact and
// noise-perturbed paths share one representation; exact counts are
// integer-valued and non-negative, noisy ones carry no sign constraint.
struct ConfusionCounts {
  double tp = 0.0;
  double fp = 0.0;
  double tn = 0.0;
  double fn = 0.0;
  double threshold = 0.0;
};

// TPR/FPR for one threshold. A missing component marks an undefined ratio
// (denominator <= 0); callers decide how to handle it, nothing here divides
// by a non-positive denominator.
struct RatePair {
  std::optional<double> fpr;
  std::optional<double> tpr;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Canonical ROC curve: points sorted by fpr (then tpr) ascending, all
// coordinates in [0, 1], first point (0,0), last point (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
};

struct CanonicalRoc {
  RocCurve curve;
  std::size_t dropped = 0;  // undefined points removed during canonicalization
};

// Strictly increasing decision thresholds in (0, 1].
class ThresholdGrid {
 public:
  // Uniform grid j / size for j = 1..size, spanning (0, 1].
  static ThresholdGrid uniform(std::size_t size);

  // Validates: non-empty, strictly increasing, every value in (0, 1].
  explicit ThresholdGrid(std::vector<double> thresholds);

  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t size() const { return thresholds_.size(); }

  bool operator==(const ThresholdGrid&) const = default;

 private:
  std::vector<double> thresholds_;
};

// Counts tp = #{y=1, s>=theta}, fp = #{y=0, s>=theta}, fn = #{y=1, s<theta},
// tn = #{y=0, s<theta}. An empty dataset yields all-zero counts.
ConfusionCounts confusion_at(const Dataset& dataset, double threshold);

// tpr = tp/(tp+fn), fpr = fp/(fp+tn); a component is left empty when its
// denominator is <= 0.
RatePair tpr_fpr(const ConfusionCounts& counts);

// Drops undefined points, clamps coordinates to [0, 1], sorts by fpr then
// tpr ascending, and pads with the (0,0) and (1,1) endpoints.
CanonicalRoc roc_canonicalize(const std::vector<RatePair>& raw_points);

// Trapezoidal area of a canonicalized curve; in [0, 1] by the clamping
// invariant.
double auc_trapezoid(const RocCurve& curve);

// Ascending-order ranks, one per score, aligned with the input. Smallest
// score gets rank 0, largest M-1; tied scores all receive the mean of the
// ranks they span, so the rank sum is always M(M-1)/2.
std::vector<double> rank_scores(const std::vector<double>& scores);

// (sum_i r_i * y_i - P(P-1)/2) / (P*N) over average ranks; O(M log M).
// Throws std::invalid_argument when P = 0 or N = 0.
double auc_rank(const Dataset& dataset);

// Reference oracle: fraction of positive-negative pairs ranked correctly,
// ties credited 0.5; O(P*N). Throws std::invalid_argument when P or N = 0.
double auc_pairwise(const Dataset& dataset);

}  // namespace fedauc

#endif  // FEDAUC_METRICS_HPP
