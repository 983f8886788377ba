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
// Correction of an AUC computed on randomly flipped labels back into an
// unbiased estimate of the clean AUC, including base-rate estimation from
// the flipped counts.

#ifndef FEDAUC_DEBIAS_HPP
#define FEDAUC_DEBIAS_HPP

namespace fedauc {

// Class-conditional flip probabilities. rho_plus applies to true positives,
// rho_minus to true negatives; both must stay below 0.5 together
// (rho_plus + rho_minus < 1) for the correction to be solvable.
struct FlipRates {
  double rho_plus = 0.0;
  double rho_minus = 0.0;

  // Rates induced by symmetric randomized response with budget eps:
  // rho_plus = rho_minus = 1/(1 + e^eps).
  static FlipRates symmetric(double eps);
};

struct BaseRateEstimate {
  double p_est = 0.0;   // estimated clean positive count P'
  double n_est = 0.0;   // N' = observed total - P'
  double pi_est = 0.5;  // P'/(P'+N') clamped to [1e-6, 1-1e-6]
  bool clamped = false; // set when the clamp actually fired
};

// Inverts the expected flip mixture: P' = (p_bar(1-rho_minus) - n_bar*rho_minus)
// / (1 - rho_plus - rho_minus). p_bar/n_bar are the observed flipped counts;
// p_bar + n_bar must be positive.
BaseRateEstimate estimate_base_rate(double p_bar, double n_bar,
                                    const FlipRates& rates);

struct AlphaBeta {
  double alpha = 0.0;  // probability an observed positive is truly negative
  double beta = 0.0;   // probability an observed negative is truly positive
};

// alpha = (1-pi)rho_minus / (pi(1-rho_plus) + (1-pi)rho_minus),
// beta  = pi*rho_plus / (pi*rho_plus + (1-pi)(1-rho_minus)).
// pi must lie in (0,1); both outputs land in [0,1) with alpha+beta < 1.
AlphaBeta alpha_beta(double pi, const FlipRates& rates);

// (noisy_auc - (alpha+beta)/2) / (1 - alpha - beta). Deliberately not clamped
// to [0,1]: clamping would bias Monte Carlo means. Requires alpha+beta < 1.
double debias_auc(double noisy_auc, double alpha, double beta);

}  // namespace fedauc

#endif  // FEDAUC_DEBIAS_HPP
