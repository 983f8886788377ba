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
// In-process simulation of K clients and one server running the private AUC
// protocols, plus dataset partitioning. Everything here is deterministic
// given (config, dataset, rng seed).

#ifndef FEDAUC_FEDERATION_HPP
#define FEDAUC_FEDERATION_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fedauc/dataset.hpp"
#include "fedauc/mechanisms.hpp"
#include "fedauc/metrics.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

// A single protocol trial failed in a recoverable way (for example the noisy
// positive count collapsed to zero or below). Monte Carlo drivers catch this
// and count the trial as failed instead of aborting the experiment.
class TrialFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Disjoint cover of dataset indices by K clients. IID partitions shuffle then
// cut near-equal blocks (sizes differ by at most one); non-IID partitions cut
// score-sorted order, so client k's max score never exceeds client k+1's min.
struct Partition {
  std::vector<std::vector<std::size_t>> assignments;

  std::size_t clients() const { return assignments.size(); }
};

Partition partition_iid(const Dataset& dataset, std::size_t clients,
                        SeededRng& rng);
Partition partition_noniid(const Dataset& dataset, std::size_t clients);

// Per-threshold noisy confusion quadruples from one client. Values are
// unrestricted in sign once noise is added; counts[j].threshold carries the
// grid value it was computed at.
struct ThresholdReport {
  std::size_t client_id = 0;
  std::vector<ConfusionCounts> counts;
};

// Rank-protocol client message. On the noise-free path local_sum is the
// client's sum of rank * label and local_p + local_n equals its sample count.
struct RankReport {
  std::size_t client_id = 0;
  double local_sum = 0.0;
  double local_p = 0.0;
  double local_n = 0.0;
};

// Sensitivity of a client's rank sum to one label flip: either the client's
// own maximum held rank (clamped to at least 1 so the noise scale stays
// positive) or the global worst case M-1 shared by every client.
enum class SensitivityMode { LocalMaxRank, GlobalMminus1 };

enum class Protocol { ThresholdLaplace, ThresholdGaussian, RankRR, RankLaplace };
enum class PartitionMode { IID, NonIID };

// Knobs for one protocol execution. Only the fields the chosen protocol
// reads are validated; see validate().
struct ProtocolConfig {
  Protocol protocol = Protocol::ThresholdLaplace;
  std::optional<ThresholdGrid> grid;  // threshold protocols only
  double eps_total = 1.0;             // whole-run label-DP budget
  double alpha = 0.5;                 // rank-Laplace split: eps_sum share
  SensitivityMode sensitivity_mode = SensitivityMode::LocalMaxRank;
  std::size_t clients = 10;
  PartitionMode partition_mode = PartitionMode::IID;
  // Analysis-only switch: report exact counts and use the true P, N (and the
  // true base rate when debiasing) instead of their noisy estimates.
  bool use_exact_pn = false;
  // Diagnostics switch: run the full pipeline with all noise and label
  // flipping turned off.
  bool noise_disabled = false;
  // RankRR only: apply the flip-rate correction to the noisy AUC. Off, the
  // protocol returns the uncorrected noisy AUC.
  bool rr_debias = true;
  double gaussian_delta = 1e-6;  // ThresholdGaussian per-stat delta

  // Throws std::invalid_argument on an inconsistent combination.
  void validate() const;
};

// Exact local confusion counts at every grid threshold plus one independent
// noise draw per statistic, scale 1/eps_per_stat (sensitivity 1). Draw order
// is fixed: thresholds in grid order, statistics in tp, fp, tn, fn order.
// Mechanism::None adds nothing and consumes no draws. A client with zero
// samples still reports (noise-only quadruples).
ThresholdReport client_threshold_report(const std::vector<Sample>& client_samples,
                                        std::size_t client_id,
                                        const ThresholdGrid& grid,
                                        double eps_per_stat,
                                        Mechanism mechanism,
                                        double gaussian_delta,
                                        SeededRng& rng);

struct ThresholdAggregate {
  double auc = 0.0;
  RocCurve curve;
  std::size_t dropped = 0;  // thresholds whose noisy rates were undefined
};

// Sums the quadruples across clients per threshold, converts to rates, and
// integrates the canonicalized curve. Throws std::invalid_argument when a
// report's thresholds disagree with the grid.
ThresholdAggregate server_threshold_aggregate(
    const std::vector<ThresholdReport>& reports, const ThresholdGrid& grid);

// Rank-protocol client reports. member_indices selects this client's samples;
// ranks and labels are the pooled per-sample vectors (ranks as produced by
// rank_scores on all scores, labels flipped or clean per protocol).
RankReport client_rank_rr_report(const std::vector<std::size_t>& member_indices,
                                 const std::vector<int>& flipped_labels,
                                 const std::vector<double>& ranks,
                                 std::size_t client_id);

// Adds Laplace(delta_k/eps_sum) to the rank sum, then Laplace(1/eps_p) to the
// positive count (in that order; local_n is derived as size - local_p, never
// noised independently). delta_k follows the sensitivity mode; total_samples
// is the pooled M needed by GlobalMminus1. exact_counts skips the count noise
// and noise_disabled skips both.
RankReport client_rank_laplace_report(const std::vector<std::size_t>& member_indices,
                                      const std::vector<int>& labels,
                                      const std::vector<double>& ranks,
                                      std::size_t client_id,
                                      double eps_sum,
                                      double eps_p,
                                      SensitivityMode mode,
                                      std::size_t total_samples,
                                      bool exact_counts,
                                      bool noise_disabled,
                                      SeededRng& rng);

// (globalSum - pbar(pbar-1)/2) / (pbar * nbar) over the summed reports.
// Throws TrialFailure when pbar * nbar <= 0. The two-argument overload
// substitutes exact P and N for the reported counts.
double server_rank_aggregate(const std::vector<RankReport>& reports);
double server_rank_aggregate(const std::vector<RankReport>& reports,
                             double p_exact, double n_exact);

// One complete trial: partition, protocol phase, aggregation, and (RankRR
// with rr_debias) the flip correction. Returns the final AUC estimate.
//
// RNG consumption order, for reproducibility: IID shuffle first (non-IID
// consumes nothing), then RankRR label flips in dataset index order, then
// per-client noise draws in client id order.
double run_protocol(const ProtocolConfig& config, const Dataset& dataset,
                    SeededRng& rng);

}  // namespace fedauc

#endif  // FEDAUC_FEDERATION_HPP
