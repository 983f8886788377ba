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

#include "fedauc/federation.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "fedauc/debias.hpp"

namespace fedauc {

namespace {

void check_partition_args(const Dataset& dataset, std::size_t clients) {
  if (clients < 1) {
    throw std::invalid_argument("partition: clients must be >= 1");
  }
  if (clients > dataset.size()) {
    throw std::invalid_argument("partition: more clients than samples");
  }
}

// Near-equal block sizes; the first (m mod k) clients take one extra.
Partition cut_blocks(std::vector<std::size_t> order, std::size_t clients) {
  const std::size_t m = order.size();
  Partition part;
  part.assignments.resize(clients);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < clients; ++c) {
    std::size_t size = m / clients + (c < m % clients ? 1 : 0);
    part.assignments[c].assign(order.begin() + static_cast<std::ptrdiff_t>(offset),
                               order.begin() + static_cast<std::ptrdiff_t>(offset + size));
    offset += size;
  }
  return part;
}

}  // namespace

Partition partition_iid(const Dataset& dataset, std::size_t clients,
                        SeededRng& rng) {
  check_partition_args(dataset, clients);
  const std::size_t m = dataset.size();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Fisher-Yates; draw order fixed so seeded runs replay.
  for (std::size_t i = m; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_index(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return cut_blocks(std::move(perm), clients);
}

Partition partition_noniid(const Dataset& dataset, std::size_t clients) {
  check_partition_args(dataset, clients);
  const std::size_t m = dataset.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& samples = dataset.samples();
  std::stable_sort(order.begin(), order.end(),
                   [&samples](std::size_t a, std::size_t b) {
                     return samples[a].score < samples[b].score;
                   });
  return cut_blocks(std::move(order), clients);
}

void ProtocolConfig::validate() const {
  if (clients < 1) {
    throw std::invalid_argument("ProtocolConfig: clients must be >= 1");
  }
  const bool threshold = protocol == Protocol::ThresholdLaplace ||
                         protocol == Protocol::ThresholdGaussian;
  if (threshold && !grid.has_value()) {
    throw std::invalid_argument(
        "ProtocolConfig: threshold protocols require a grid");
  }
  if (noise_disabled) return;
  if (!(eps_total > 0.0)) {
    throw std::invalid_argument("ProtocolConfig: eps_total must be positive");
  }
  if (protocol == Protocol::RankLaplace && !use_exact_pn &&
      !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ProtocolConfig: alpha must lie in (0,1)");
  }
  if (protocol == Protocol::ThresholdGaussian &&
      !(gaussian_delta > 0.0 && gaussian_delta < 1.0)) {
    throw std::invalid_argument(
        "ProtocolConfig: gaussian_delta must lie in (0,1)");
  }
}

ThresholdReport client_threshold_report(const std::vector<Sample>& client_samples,
                                        std::size_t client_id,
                                        const ThresholdGrid& grid,
                                        double eps_per_stat,
                                        Mechanism mechanism,
                                        double gaussian_delta,
                                        SeededRng& rng) {
  if (mechanism != Mechanism::None && !(eps_per_stat > 0.0)) {
    throw std::invalid_argument(
        "client_threshold_report: eps_per_stat must be positive");
  }
  std::vector<double> pos;
  std::vector<double> neg;
  for (const Sample& s : client_samples) {
    (s.label == 1 ? pos : neg).push_back(s.score);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  NoiseSpec spec;
  spec.mechanism = mechanism;
  spec.sensitivity = 1.0;
  spec.epsilon = eps_per_stat;
  spec.delta = mechanism == Mechanism::Gaussian ? gaussian_delta : 0.0;

  ThresholdReport report;
  report.client_id = client_id;
  report.counts.reserve(grid.size());
  for (double theta : grid.thresholds()) {
    ConfusionCounts c;
    c.threshold = theta;
    c.tp = static_cast<double>(pos.end() -
                               std::lower_bound(pos.begin(), pos.end(), theta));
    c.fp = static_cast<double>(neg.end() -
                               std::lower_bound(neg.begin(), neg.end(), theta));
    c.fn = static_cast<double>(pos.size()) - c.tp;
    c.tn = static_cast<double>(neg.size()) - c.fp;
    if (mechanism == Mechanism::Laplace) {
      c.tp += laplace_sample(spec, rng);
      c.fp += laplace_sample(spec, rng);
      c.tn += laplace_sample(spec, rng);
      c.fn += laplace_sample(spec, rng);
    } else if (mechanism == Mechanism::Gaussian) {
      c.tp += gaussian_sample(spec, rng);
      c.fp += gaussian_sample(spec, rng);
      c.tn += gaussian_sample(spec, rng);
      c.fn += gaussian_sample(spec, rng);
    }
    report.counts.push_back(c);
  }
  return report;
}

ThresholdAggregate server_threshold_aggregate(
    const std::vector<ThresholdReport>& reports, const ThresholdGrid& grid) {
  const std::size_t g = grid.size();
  std::vector<ConfusionCounts> sums(g);
  for (std::size_t j = 0; j < g; ++j) sums[j].threshold = grid.thresholds()[j];
  for (const ThresholdReport& report : reports) {
    if (report.counts.size() != g) {
      throw std::invalid_argument(
          "server_threshold_aggregate: report grid size mismatch");
    }
    for (std::size_t j = 0; j < g; ++j) {
      if (report.counts[j].threshold != grid.thresholds()[j]) {
        throw std::invalid_argument(
            "server_threshold_aggregate: report threshold mismatch");
      }
      sums[j].tp += report.counts[j].tp;
      sums[j].fp += report.counts[j].fp;
      sums[j].tn += report.counts[j].tn;
      sums[j].fn += report.counts[j].fn;
    }
  }
  std::vector<RatePair> rates;
  rates.reserve(g);
  for (const ConfusionCounts& c : sums) rates.push_back(tpr_fpr(c));
  CanonicalRoc roc = roc_canonicalize(rates);
  ThresholdAggregate out;
  out.auc = auc_trapezoid(roc.curve);
  out.curve = std::move(roc.curve);
  out.dropped = roc.dropped;
  return out;
}

namespace {

void check_member_indices(const std::vector<std::size_t>& member_indices,
                          std::size_t m, const char* who) {
  for (std::size_t i : member_indices) {
    if (i >= m) {
      throw std::invalid_argument(std::string(who) + ": index out of range");
    }
  }
}

}  // namespace

RankReport client_rank_rr_report(const std::vector<std::size_t>& member_indices,
                                 const std::vector<int>& flipped_labels,
                                 const std::vector<double>& ranks,
                                 std::size_t client_id) {
  if (flipped_labels.size() != ranks.size()) {
    throw std::invalid_argument(
        "client_rank_rr_report: labels and ranks length mismatch");
  }
  check_member_indices(member_indices, ranks.size(), "client_rank_rr_report");
  RankReport report;
  report.client_id = client_id;
  for (std::size_t i : member_indices) {
    if (flipped_labels[i] == 1) {
      report.local_sum += ranks[i];
      report.local_p += 1.0;
    } else {
      report.local_n += 1.0;
    }
  }
  return report;
}

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
                                      SeededRng& rng) {
  RankReport report =
      client_rank_rr_report(member_indices, labels, ranks, client_id);
  if (noise_disabled) return report;

  if (!(eps_sum > 0.0)) {
    throw std::invalid_argument(
        "client_rank_laplace_report: eps_sum must be positive");
  }
  double sensitivity;
  if (mode == SensitivityMode::GlobalMminus1) {
    if (total_samples < 2) {
      throw std::invalid_argument(
          "client_rank_laplace_report: global sensitivity needs M >= 2");
    }
    sensitivity = static_cast<double>(total_samples - 1);
  } else {
    double max_rank = 0.0;
    for (std::size_t i : member_indices) max_rank = std::max(max_rank, ranks[i]);
    // Clamp: the rank-0 holder would otherwise get a zero noise scale.
    sensitivity = std::max(1.0, max_rank);
  }
  NoiseSpec sum_spec;
  sum_spec.mechanism = Mechanism::Laplace;
  sum_spec.sensitivity = sensitivity;
  sum_spec.epsilon = eps_sum;
  report.local_sum += laplace_sample(sum_spec, rng);

  if (!exact_counts) {
    if (!(eps_p > 0.0)) {
      throw std::invalid_argument(
          "client_rank_laplace_report: eps_p must be positive");
    }
    NoiseSpec count_spec;
    count_spec.mechanism = Mechanism::Laplace;
    count_spec.sensitivity = 1.0;
    count_spec.epsilon = eps_p;
    report.local_p += laplace_sample(count_spec, rng);
    report.local_n = static_cast<double>(member_indices.size()) - report.local_p;
  }
  return report;
}

namespace {

double rank_auc_from_totals(double global_sum, double p, double n) {
  if (!(p * n > 0.0)) {
    throw TrialFailure("rank aggregate collapsed: noisy P*N is not positive");
  }
  return (global_sum - p * (p - 1.0) / 2.0) / (p * n);
}

}  // namespace

double server_rank_aggregate(const std::vector<RankReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("server_rank_aggregate: no reports");
  }
  double global_sum = 0.0;
  double p_bar = 0.0;
  double n_bar = 0.0;
  for (const RankReport& r : reports) {
    global_sum += r.local_sum;
    p_bar += r.local_p;
    n_bar += r.local_n;
  }
  return rank_auc_from_totals(global_sum, p_bar, n_bar);
}

double server_rank_aggregate(const std::vector<RankReport>& reports,
                             double p_exact, double n_exact) {
  if (reports.empty()) {
    throw std::invalid_argument("server_rank_aggregate: no reports");
  }
  double global_sum = 0.0;
  for (const RankReport& r : reports) global_sum += r.local_sum;
  return rank_auc_from_totals(global_sum, p_exact, n_exact);
}

double run_protocol(const ProtocolConfig& config, const Dataset& dataset,
                    SeededRng& rng) {
  config.validate();
  if (dataset.positives() == 0 || dataset.negatives() == 0) {
    throw std::invalid_argument(
        "run_protocol: dataset needs at least one sample of each class");
  }
  const Partition part = config.partition_mode == PartitionMode::IID
                             ? partition_iid(dataset, config.clients, rng)
                             : partition_noniid(dataset, config.clients);
  const auto& samples = dataset.samples();
  const std::size_t m = dataset.size();

  if (config.protocol == Protocol::ThresholdLaplace ||
      config.protocol == Protocol::ThresholdGaussian) {
    const ThresholdGrid& grid = *config.grid;
    const Mechanism mechanism =
        config.noise_disabled
            ? Mechanism::None
            : (config.protocol == Protocol::ThresholdLaplace
                   ? Mechanism::Laplace
                   : Mechanism::Gaussian);
    const double eps_per_stat =
        config.noise_disabled
            ? 0.0
            : config.eps_total / (4.0 * static_cast<double>(grid.size()));
    std::vector<ThresholdReport> reports;
    reports.reserve(part.clients());
    std::vector<Sample> local;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      local.clear();
      local.reserve(part.assignments[c].size());
      for (std::size_t i : part.assignments[c]) local.push_back(samples[i]);
      reports.push_back(client_threshold_report(local, c, grid, eps_per_stat,
                                                mechanism,
                                                config.gaussian_delta, rng));
    }
    return server_threshold_aggregate(reports, grid).auc;
  }

  // Rank protocols: the server ranks the pooled scores.
  std::vector<double> scores(m);
  std::vector<int> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    scores[i] = samples[i].score;
    labels[i] = samples[i].label;
  }
  const std::vector<double> ranks = rank_scores(scores);
  const double p_true = static_cast<double>(dataset.positives());
  const double n_true = static_cast<double>(dataset.negatives());

  if (config.protocol == Protocol::RankRR) {
    std::vector<int> flipped = labels;
    if (!config.noise_disabled) {
      const RrSpec rr(config.eps_total);
      for (std::size_t i = 0; i < m; ++i) flipped[i] = rr_flip(labels[i], rr, rng);
    }
    std::vector<RankReport> reports;
    reports.reserve(part.clients());
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(
          client_rank_rr_report(part.assignments[c], flipped, ranks, c));
    }
    const double noisy = config.use_exact_pn
                             ? server_rank_aggregate(reports, p_true, n_true)
                             : server_rank_aggregate(reports);
    if (config.noise_disabled || !config.rr_debias) return noisy;
    const FlipRates rates = FlipRates::symmetric(config.eps_total);
    double pi;
    if (config.use_exact_pn) {
      pi = p_true / (p_true + n_true);
    } else {
      double p_bar = 0.0;
      double n_bar = 0.0;
      for (const RankReport& r : reports) {
        p_bar += r.local_p;
        n_bar += r.local_n;
      }
      pi = estimate_base_rate(p_bar, n_bar, rates).pi_est;
    }
    const AlphaBeta ab = alpha_beta(pi, rates);
    return debias_auc(noisy, ab.alpha, ab.beta);
  }

  // RankLaplace. With exact counts the whole budget goes to the rank sums.
  double eps_sum = 0.0;
  double eps_p = 0.0;
  if (!config.noise_disabled) {
    if (config.use_exact_pn) {
      eps_sum = config.eps_total;
    } else {
      const BudgetSplit split = split_budget(config.eps_total, config.alpha);
      eps_sum = split.eps_sum;
      eps_p = split.eps_p;
    }
  }
  std::vector<RankReport> reports;
  reports.reserve(part.clients());
  for (std::size_t c = 0; c < part.clients(); ++c) {
    reports.push_back(client_rank_laplace_report(
        part.assignments[c], labels, ranks, c, eps_sum, eps_p,
        config.sensitivity_mode, m, config.use_exact_pn, config.noise_disabled,
        rng));
  }
  return config.use_exact_pn ? server_rank_aggregate(reports, p_true, n_true)
                             : server_rank_aggregate(reports);
}

}  // namespace fedauc
