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
// Closed-form variance predictors for the private AUC estimators, the Monte
// Carlo harness that validates them, the top-k label-inference attack, and
// prediction-score perturbation.

#ifndef FEDAUC_ANALYSIS_HPP
#define FEDAUC_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedauc/dataset.hpp"
#include "fedauc/federation.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

enum class VarianceFormula { LocalLaplace, GlobalLaplace, RrNoisy };

struct VariancePrediction {
  double variance = 0.0;
  double std_dev = 0.0;  // sqrt(variance)
  VarianceFormula formula = VarianceFormula::LocalLaplace;
};

// Variance of the rank-Laplace AUC when each of K one-sample clients noises
// its rank sum with its own rank as sensitivity and P, N are exact:
// K(K-1)(2K-1) / (3 P^2 N^2 eps^2).
VariancePrediction var_local_laplace(std::size_t k, std::size_t p,
                                     std::size_t n, double eps);

// Variance under the shared worst-case sensitivity M-1 across K clients:
// 2 K (M-1)^2 / (P^2 N^2 eps^2). Exact P, N assumed.
VariancePrediction var_global_laplace(std::size_t k, std::size_t m,
                                      std::size_t p, std::size_t n,
                                      double eps);

// Variance of the pre-correction noisy AUC under randomized response with
// exact P, N: r(1-r) * M(M-1)(2M-1)/6 / (P^2 N^2), r = 1/(1+e^eps).
VariancePrediction var_rr_noisy(std::size_t m, std::size_t p, std::size_t n,
                                double eps);

// Repeated-trial summary. mean and std_dev (sample std, n-1 denominator)
// cover successful trials only; estimates.size() + failures = trials.
struct ExperimentResult {
  std::size_t trials = 0;
  std::vector<double> estimates;
  std::size_t failures = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

// Runs run_protocol once per trial with seed base_seed + trial index,
// counting TrialFailure as a failed trial. Throws std::runtime_error when
// every trial fails. Deterministic for fixed inputs.
ExperimentResult monte_carlo(const ProtocolConfig& config,
                             const Dataset& dataset, std::size_t trials,
                             std::uint64_t base_seed);

// One predictor evaluated against a Monte Carlo run constructed under the
// predictor's own model assumptions.
struct VarianceValidation {
  VariancePrediction predicted;
  double empirical_std = 0.0;   // harness-adjusted Monte Carlo std
  double relative_error = 0.0;  // |predicted - empirical| / predicted
  std::size_t trials = 0;
  std::size_t failures = 0;
};

// One-sample-per-client rank-Laplace regime on a tie-free ladder dataset
// with exact P, N. The one client holding rank 0 runs with the clamped
// sensitivity 1; its noise contribution 2/(eps^2 P^2 N^2) is subtracted from
// the Monte Carlo variance before comparison, since the closed form sums
// ranks 1 through K-1 only.
VarianceValidation validate_local_laplace(std::size_t k, std::size_t p,
                                          std::size_t n, double eps,
                                          std::size_t trials,
                                          std::uint64_t base_seed);

// K-client GlobalMminus1 regime, exact P, N, tie-free ladder scores.
VarianceValidation validate_global_laplace(std::size_t k, std::size_t m,
                                           std::size_t p, std::size_t n,
                                           double eps, std::size_t trials,
                                           std::uint64_t base_seed);

// Randomized-response flips with the uncorrected noisy AUC evaluated at the
// exact P, N, tie-free ladder scores.
VarianceValidation validate_rr_noisy(std::size_t m, std::size_t p,
                                     std::size_t n, double eps,
                                     std::size_t trials,
                                     std::uint64_t base_seed);

struct AttackResult {
  std::size_t k = 0;
  std::size_t true_positives_in_topk = 0;
  double precision = 0.0;  // true_positives_in_topk / k
  double recall = 0.0;     // true_positives_in_topk / P
};

// Guesses the k highest-scored samples as positives. Ties at the cut are
// broken by input order (stable). Requires 1 <= k <= M and at least one
// positive in the dataset.
AttackResult topk_attack(const Dataset& dataset, std::size_t k);

// Adds independent Laplace(1/eps) noise to every score, one draw per sample
// in index order. Outputs are intentionally not re-clamped to [0, 1]:
// clamping would pile mass at the boundaries and distort ranking statistics.
// Labels are unchanged.
Dataset perturb_scores(const Dataset& dataset, double eps, SeededRng& rng);

// Per-class score histograms over [0, 1] with uniform bins, each normalized
// to total mass 1. Scores outside [0, 1] count toward the nearest edge bin.
// An empty class yields an all-zero histogram and its flag set.
struct ScoreDensity {
  std::vector<double> positive;
  std::vector<double> negative;
  bool positive_empty = false;
  bool negative_empty = false;
};

ScoreDensity score_density(const Dataset& dataset, std::size_t bins);

}  // namespace fedauc

#endif  // FEDAUC_ANALYSIS_HPP
