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

#include "fedauc/mechanisms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fedauc {

namespace {

void check_scale_params(const NoiseSpec& spec, const char* who) {
  if (!(spec.sensitivity > 0.0) || !std::isfinite(spec.sensitivity)) {
    throw std::invalid_argument(std::string(who) +
                                ": sensitivity must be positive");
  }
  if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) {
    throw std::invalid_argument(std::string(who) +
                                ": epsilon must be positive");
  }
}

}  // namespace

RrSpec::RrSpec(double eps) {
  if (eps < 0.0 || !std::isfinite(eps)) {
    throw std::invalid_argument("RrSpec: epsilon must be non-negative");
  }
  epsilon = eps;
  // e^eps/(1+e^eps) rewritten for numerical stability; saturates to 1.0 in
  // double precision once eps exceeds roughly 37.
  keep_prob = 1.0 / (1.0 + std::exp(-eps));
}

void BudgetAccountant::record(std::string label, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("BudgetAccountant: epsilon must be positive");
  }
  entries_.emplace_back(std::move(label), epsilon);
}

double BudgetAccountant::total() const {
  double total = 0.0;
  for (const auto& entry : entries_) total += entry.second;
  return total;
}

double laplace_sample(const NoiseSpec& spec, SeededRng& rng) {
  if (spec.mechanism != Mechanism::Laplace) {
    throw std::invalid_argument("laplace_sample: spec mechanism is not Laplace");
  }
  if (spec.delta != 0.0) {
    throw std::invalid_argument("laplace_sample: Laplace requires delta = 0");
  }
  check_scale_params(spec, "laplace_sample");
  const double b = spec.sensitivity / spec.epsilon;
  // Inverse CDF on one uniform: u in (-0.5, 0.5), x = -b sgn(u) ln(1-2|u|).
  const double u = rng.next_unit() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -b * sign * std::log1p(-2.0 * std::fabs(u));
}

double gaussian_sample(const NoiseSpec& spec, SeededRng& rng) {
  if (spec.mechanism != Mechanism::Gaussian) {
    throw std::invalid_argument(
        "gaussian_sample: spec mechanism is not Gaussian");
  }
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    throw std::invalid_argument("gaussian_sample: delta must lie in (0,1)");
  }
  check_scale_params(spec, "gaussian_sample");
  const double sigma =
      spec.sensitivity * std::sqrt(2.0 * std::log(1.25 / spec.delta)) /
      spec.epsilon;
  // Box-Muller, exactly two uniforms per draw (the companion value is
  // discarded so the stream position stays predictable).
  const double u1 = rng.next_unit();
  const double u2 = rng.next_unit();
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int rr_flip(int label, const RrSpec& spec, SeededRng& rng) {
  if (label != 0 && label != 1) {
    throw std::invalid_argument("rr_flip: label must be 0 or 1");
  }
  return rng.next_unit() < spec.keep_prob ? label : 1 - label;
}

double threshold_budget(std::size_t grid_size, double eps_per_stat,
                        BudgetAccountant* accountant) {
  if (grid_size == 0) {
    throw std::invalid_argument("threshold_budget: grid_size must be >= 1");
  }
  if (!(eps_per_stat > 0.0) || !std::isfinite(eps_per_stat)) {
    throw std::invalid_argument(
        "threshold_budget: eps_per_stat must be positive");
  }
  if (accountant != nullptr) {
    static const char* const kStats[] = {"tp", "fp", "tn", "fn"};
    for (std::size_t j = 0; j < grid_size; ++j) {
      for (const char* stat : kStats) {
        accountant->record("theta[" + std::to_string(j) + "]." + stat,
                           eps_per_stat);
      }
    }
  }
  return static_cast<double>(grid_size) * 4.0 * eps_per_stat;
}

BudgetSplit split_budget(double total_eps, double alpha) {
  if (!(total_eps > 0.0) || !std::isfinite(total_eps)) {
    throw std::invalid_argument("split_budget: total_eps must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("split_budget: alpha must lie in (0,1)");
  }
  // The larger share is the rounded product; the smaller is the exact
  // complement (Sterbenz), so the two always sum back to total_eps.
  BudgetSplit split;
  if (alpha >= 0.5) {
    split.eps_sum = alpha * total_eps;
    split.eps_p = total_eps - split.eps_sum;
  } else {
    split.eps_p = (1.0 - alpha) * total_eps;
    split.eps_sum = total_eps - split.eps_p;
  }
  if (!(split.eps_sum > 0.0) || !(split.eps_p > 0.0)) {
    throw std::invalid_argument("split_budget: alpha too extreme for budget");
  }
  return split;
}

}  // namespace fedauc
