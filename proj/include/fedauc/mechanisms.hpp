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
// Differentially private primitives: calibrated Laplace and Gaussian
// samplers, randomized response, and privacy-budget arithmetic.

#ifndef FEDAUC_MECHANISMS_HPP
#define FEDAUC_MECHANISMS_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fedauc/rng.hpp"

namespace fedauc {

enum class Mechanism { Laplace, Gaussian, None };

// Calibration record for one numeric query. Laplace uses scale
// sensitivity/epsilon and requires delta = 0; Gaussian uses
// sigma = sensitivity * sqrt(2 ln(1.25/delta)) / epsilon with delta in (0,1).
struct NoiseSpec {
  Mechanism mechanism = Mechanism::None;
  double sensitivity = 1.0;  // > 0
  double epsilon = 1.0;      // per-query budget, > 0
  double delta = 0.0;        // Gaussian only
};

// Symmetric randomized response over a binary label: answer truthfully with
// probability e^eps/(1+e^eps), lie otherwise.
struct RrSpec {
  explicit RrSpec(double eps);

  double epsilon = 0.0;    // >= 0
  double keep_prob = 0.5;  // e^eps/(1+e^eps), in [0.5, 1)
  double flip_prob() const { return 1.0 - keep_prob; }
};

// Sequential-composition ledger: total budget is the sum of all recorded
// per-query budgets, in any insertion order.
class BudgetAccountant {
 public:
  // Rejects non-positive epsilon.
  void record(std::string label, double epsilon);

  double total() const;
  const std::vector<std::pair<std::string, double>>& ledger() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

// One draw from Laplace(0, b) with b = sensitivity/epsilon, via inverse CDF
// on a single uniform draw. Requires spec.mechanism = Laplace.
double laplace_sample(const NoiseSpec& spec, SeededRng& rng);

// One draw from Normal(0, sigma) with the calibration above, via Box-Muller
// on exactly two uniform draws. Requires spec.mechanism = Gaussian.
double gaussian_sample(const NoiseSpec& spec, SeededRng& rng);

// Returns label with probability spec.keep_prob, its complement otherwise.
// Consumes exactly one uniform draw. label must be 0 or 1.
int rr_flip(int label, const RrSpec& spec, SeededRng& rng);

// Total budget of a threshold sweep: grid_size thresholds times four
// statistics, each spending eps_per_stat. Optionally records one entry per
// statistic into the accountant.
double threshold_budget(std::size_t grid_size, double eps_per_stat,
                        BudgetAccountant* accountant = nullptr);

struct BudgetSplit {
  double eps_sum = 0.0;  // share for the rank-sum statistic
  double eps_p = 0.0;    // share for the positive count
};

// eps_sum = alpha * total_eps, eps_p = (1 - alpha) * total_eps;
// parts sum back to total_eps exactly. alpha must lie in (0, 1).
BudgetSplit split_budget(double total_eps, double alpha);

}  // namespace fedauc

#endif  // FEDAUC_MECHANISMS_HPP
