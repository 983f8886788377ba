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

#include "fedauc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedauc/mechanisms.hpp"
#include "fedauc/metrics.hpp"

namespace fedauc {

namespace {

void check_positive_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(who) + ": eps must be positive");
  }
}

VariancePrediction make_prediction(double variance, VarianceFormula formula) {
  VariancePrediction pred;
  pred.variance = variance;
  pred.std_dev = std::sqrt(variance);
  pred.formula = formula;
  return pred;
}

}  // namespace

VariancePrediction var_local_laplace(std::size_t k, std::size_t p,
                                     std::size_t n, double eps) {
  if (k < 2) {
    throw std::invalid_argument("var_local_laplace: k must be >= 2");
  }
  if (p < 1 || n < 1) {
    throw std::invalid_argument("var_local_laplace: p and n must be >= 1");
  }
  check_positive_eps(eps, "var_local_laplace");
  const double kd = static_cast<double>(k);
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double variance = kd * (kd - 1.0) * (2.0 * kd - 1.0) /
                          (3.0 * pd * pd * nd * nd * eps * eps);
  return make_prediction(variance, VarianceFormula::LocalLaplace);
}

VariancePrediction var_global_laplace(std::size_t k, std::size_t m,
                                      std::size_t p, std::size_t n,
                                      double eps) {
  if (k < 1) {
    throw std::invalid_argument("var_global_laplace: k must be >= 1");
  }
  if (p < 1 || n < 1 || p + n != m) {
    throw std::invalid_argument("var_global_laplace: m must equal p + n");
  }
  check_positive_eps(eps, "var_global_laplace");
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double variance = 2.0 * kd * (md - 1.0) * (md - 1.0) /
                          (pd * pd * nd * nd * eps * eps);
  return make_prediction(variance, VarianceFormula::GlobalLaplace);
}

VariancePrediction var_rr_noisy(std::size_t m, std::size_t p, std::size_t n,
                                double eps) {
  if (m < 2 || p < 1 || n < 1 || p + n != m) {
    throw std::invalid_argument(
        "var_rr_noisy: m must equal p + n and be >= 2");
  }
  if (eps < 0.0 || !std::isfinite(eps)) {
    throw std::invalid_argument("var_rr_noisy: eps must be non-negative");
  }
  const double r = 1.0 / (1.0 + std::exp(eps));  // flip probability
  const double md = static_cast<double>(m);
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double rank_square_sum = md * (md - 1.0) * (2.0 * md - 1.0) / 6.0;
  const double variance = r * (1.0 - r) * rank_square_sum / (pd * pd * nd * nd);
  return make_prediction(variance, VarianceFormula::RrNoisy);
}

ExperimentResult monte_carlo(const ProtocolConfig& config,
                             const Dataset& dataset, std::size_t trials,
                             std::uint64_t base_seed) {
  if (trials < 1) {
    throw std::invalid_argument("monte_carlo: trials must be >= 1");
  }
  config.validate();
  ExperimentResult result;
  result.trials = trials;
  result.estimates.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    SeededRng rng(trial_seed(base_seed, t));
    try {
      result.estimates.push_back(run_protocol(config, dataset, rng));
    } catch (const TrialFailure&) {
      ++result.failures;
    }
  }
  if (result.estimates.empty()) {
    throw std::runtime_error("monte_carlo: every trial failed");
  }
  const std::size_t n = result.estimates.size();
  double sum = 0.0;
  for (double e : result.estimates) sum += e;
  result.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    double ss = 0.0;
    for (double e : result.estimates) {
      const double d = e - result.mean;
      ss += d * d;
    }
    result.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return result;
}

namespace {

// Strictly increasing scores (i + 0.5)/m, so ranks are exactly 0..m-1; the
// last p samples carry the positive labels.
Dataset make_ladder(std::size_t m, std::size_t p) {
  std::vector<Sample> samples(m);
  for (std::size_t i = 0; i < m; ++i) {
    samples[i].score =
        (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    samples[i].label = i >= m - p ? 1 : 0;
  }
  return Dataset(std::move(samples));
}

VarianceValidation compare(const VariancePrediction& predicted,
                           const ExperimentResult& mc,
                           double variance_adjustment) {
  VarianceValidation v;
  v.predicted = predicted;
  const double adjusted =
      std::max(0.0, mc.std_dev * mc.std_dev - variance_adjustment);
  v.empirical_std = std::sqrt(adjusted);
  v.relative_error =
      std::fabs(predicted.std_dev - v.empirical_std) / predicted.std_dev;
  v.trials = mc.trials;
  v.failures = mc.failures;
  return v;
}

}  // namespace

VarianceValidation validate_local_laplace(std::size_t k, std::size_t p,
                                          std::size_t n, double eps,
                                          std::size_t trials,
                                          std::uint64_t base_seed) {
  if (p + n != k) {
    throw std::invalid_argument(
        "validate_local_laplace: one sample per client requires p + n = k");
  }
  ProtocolConfig config;
  config.protocol = Protocol::RankLaplace;
  config.sensitivity_mode = SensitivityMode::LocalMaxRank;
  config.clients = k;
  config.eps_total = eps;
  config.use_exact_pn = true;
  const ExperimentResult mc =
      monte_carlo(config, make_ladder(k, p), trials, base_seed);
  const VariancePrediction predicted = var_local_laplace(k, p, n, eps);
  // The rank-0 client runs with the clamped sensitivity 1, adding
  // 2/(eps^2 P^2 N^2) of AUC variance outside the closed form's sum.
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double clamp_extra = 2.0 / (eps * eps * pd * pd * nd * nd);
  return compare(predicted, mc, clamp_extra);
}

VarianceValidation validate_global_laplace(std::size_t k, std::size_t m,
                                           std::size_t p, std::size_t n,
                                           double eps, std::size_t trials,
                                           std::uint64_t base_seed) {
  ProtocolConfig config;
  config.protocol = Protocol::RankLaplace;
  config.sensitivity_mode = SensitivityMode::GlobalMminus1;
  config.clients = k;
  config.eps_total = eps;
  config.use_exact_pn = true;
  const ExperimentResult mc =
      monte_carlo(config, make_ladder(m, p), trials, base_seed);
  return compare(var_global_laplace(k, m, p, n, eps), mc, 0.0);
}

VarianceValidation validate_rr_noisy(std::size_t m, std::size_t p,
                                     std::size_t n, double eps,
                                     std::size_t trials,
                                     std::uint64_t base_seed) {
  ProtocolConfig config;
  config.protocol = Protocol::RankRR;
  config.clients = std::min<std::size_t>(10, m);
  config.eps_total = eps;
  config.use_exact_pn = true;
  config.rr_debias = false;  // the predictor covers the uncorrected AUC
  const ExperimentResult mc =
      monte_carlo(config, make_ladder(m, p), trials, base_seed);
  return compare(var_rr_noisy(m, p, n, eps), mc, 0.0);
}

AttackResult topk_attack(const Dataset& dataset, std::size_t k) {
  const std::size_t m = dataset.size();
  if (k < 1 || k > m) {
    throw std::invalid_argument("topk_attack: k must lie in [1, M]");
  }
  if (dataset.positives() == 0) {
    throw std::invalid_argument("topk_attack: dataset has no positives");
  }
  const auto& samples = dataset.samples();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable: equal scores keep input order, making the cut reproducible.
  std::stable_sort(order.begin(), order.end(),
                   [&samples](std::size_t a, std::size_t b) {
                     return samples[a].score > samples[b].score;
                   });
  std::size_t tp = 0;
  for (std::size_t i = 0; i < k; ++i) {
    tp += static_cast<std::size_t>(samples[order[i]].label);
  }
  AttackResult result;
  result.k = k;
  result.true_positives_in_topk = tp;
  result.precision = static_cast<double>(tp) / static_cast<double>(k);
  result.recall =
      static_cast<double>(tp) / static_cast<double>(dataset.positives());
  return result;
}

Dataset perturb_scores(const Dataset& dataset, double eps, SeededRng& rng) {
  check_positive_eps(eps, "perturb_scores");
  NoiseSpec spec;
  spec.mechanism = Mechanism::Laplace;
  spec.sensitivity = 1.0;
  spec.epsilon = eps;
  std::vector<Sample> out = dataset.samples();
  for (Sample& s : out) s.score += laplace_sample(spec, rng);
  return Dataset(std::move(out));
}

ScoreDensity score_density(const Dataset& dataset, std::size_t bins) {
  if (bins < 1) {
    throw std::invalid_argument("score_density: bins must be >= 1");
  }
  ScoreDensity density;
  density.positive.assign(bins, 0.0);
  density.negative.assign(bins, 0.0);
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  for (const Sample& s : dataset.samples()) {
    const double clamped = std::clamp(s.score, 0.0, 1.0);
    const std::size_t bin = std::min(
        bins - 1, static_cast<std::size_t>(clamped * static_cast<double>(bins)));
    if (s.label == 1) {
      density.positive[bin] += 1.0;
      ++pos_count;
    } else {
      density.negative[bin] += 1.0;
      ++neg_count;
    }
  }
  if (pos_count == 0) {
    density.positive_empty = true;
  } else {
    for (double& v : density.positive) v /= static_cast<double>(pos_count);
  }
  if (neg_count == 0) {
    density.negative_empty = true;
  } else {
    for (double& v : density.negative) v /= static_cast<double>(neg_count);
  }
  return density;
}

}  // namespace fedauc
