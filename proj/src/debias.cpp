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

#include "fedauc/debias.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedauc {

namespace {

void check_rates(const FlipRates& rates, const char* who) {
  if (rates.rho_plus < 0.0 || rates.rho_minus < 0.0 ||
      !std::isfinite(rates.rho_plus) || !std::isfinite(rates.rho_minus)) {
    throw std::invalid_argument(std::string(who) +
                                ": flip rates must be non-negative");
  }
  if (!(rates.rho_plus + rates.rho_minus < 1.0)) {
    throw std::invalid_argument(std::string(who) +
                                ": flip rates must sum below 1");
  }
}

}  // namespace

FlipRates FlipRates::symmetric(double eps) {
  if (eps < 0.0 || !std::isfinite(eps)) {
    throw std::invalid_argument("FlipRates: epsilon must be non-negative");
  }
  const double rho = 1.0 / (1.0 + std::exp(eps));
  return {rho, rho};
}

BaseRateEstimate estimate_base_rate(double p_bar, double n_bar,
                                    const FlipRates& rates) {
  check_rates(rates, "estimate_base_rate");
  const double total = p_bar + n_bar;
  if (!(total > 0.0)) {
    throw std::invalid_argument(
        "estimate_base_rate: observed counts must sum above 0");
  }
  const double denom = 1.0 - rates.rho_plus - rates.rho_minus;
  BaseRateEstimate est;
  est.p_est =
      (p_bar * (1.0 - rates.rho_minus) - n_bar * rates.rho_minus) / denom;
  est.n_est = total - est.p_est;
  const double pi = est.p_est / total;
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1.0 - 1e-6;
  est.clamped = pi < kLo || pi > kHi;
  est.pi_est = std::clamp(pi, kLo, kHi);
  return est;
}

AlphaBeta alpha_beta(double pi, const FlipRates& rates) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument("alpha_beta: pi must lie in (0,1)");
  }
  check_rates(rates, "alpha_beta");
  const double denom_alpha =
      pi * (1.0 - rates.rho_plus) + (1.0 - pi) * rates.rho_minus;
  const double denom_beta =
      pi * rates.rho_plus + (1.0 - pi) * (1.0 - rates.rho_minus);
  // Positive whenever the preconditions hold; a zero here is a logic error.
  if (!(denom_alpha > 0.0) || !(denom_beta > 0.0)) {
    throw std::logic_error("alpha_beta: degenerate mixture denominator");
  }
  return {(1.0 - pi) * rates.rho_minus / denom_alpha,
          pi * rates.rho_plus / denom_beta};
}

double debias_auc(double noisy_auc, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("debias_auc: alpha and beta must be >= 0");
  }
  const double denom = 1.0 - alpha - beta;
  if (!(denom > 0.0)) {
    throw std::invalid_argument("debias_auc: alpha + beta must stay below 1");
  }
  return (noisy_auc - 0.5 * (alpha + beta)) / denom;
}

}  // namespace fedauc
