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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fedauc/debias.hpp"
#include "fedauc/federation.hpp"
#include "fedauc/mechanisms.hpp"
#include "fedauc/metrics.hpp"
#include "fedauc/rng.hpp"

namespace {

fedauc::Dataset random_dataset(fedauc::SeededRng& rng, std::size_t m,
                               double base_rate) {
  std::vector<fedauc::Sample> samples(m);
  for (;;) {
    std::size_t pos = 0;
    for (fedauc::Sample& s : samples) {
      s.label = rng.next_unit() < base_rate ? 1 : 0;
      const double u = rng.next_unit();
      s.score = s.label == 1 ? std::sqrt(u) : u;
      pos += static_cast<std::size_t>(s.label);
    }
    if (pos > 0 && pos < m) break;
  }
  return fedauc::Dataset(samples);
}

std::vector<double> pooled_ranks(const fedauc::Dataset& d) {
  std::vector<double> scores(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) scores[i] = d.samples()[i].score;
  return fedauc::rank_scores(scores);
}

std::vector<int> pooled_labels(const fedauc::Dataset& d) {
  std::vector<int> labels(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) labels[i] = d.samples()[i].label;
  return labels;
}

}  // namespace

TEST_CASE("partition_iid cuts near-equal disjoint blocks") {
  fedauc::SeededRng data_rng(11);
  SUBCASE("even split") {
    const fedauc::Dataset d = random_dataset(data_rng, 10, 0.5);
    fedauc::SeededRng rng(1);
    const fedauc::Partition part = fedauc::partition_iid(d, 2, rng);
    REQUIRE(part.clients() == 2);
    CHECK(part.assignments[0].size() == 5);
    CHECK(part.assignments[1].size() == 5);
  }
  SUBCASE("remainder goes to the first clients") {
    const fedauc::Dataset d = random_dataset(data_rng, 10, 0.5);
    fedauc::SeededRng rng(1);
    const fedauc::Partition part = fedauc::partition_iid(d, 3, rng);
    REQUIRE(part.clients() == 3);
    CHECK(part.assignments[0].size() == 4);
    CHECK(part.assignments[1].size() == 3);
    CHECK(part.assignments[2].size() == 3);
  }
  SUBCASE("large uneven split") {
    // 458407 = 1000 * 458 + 407: the first 407 clients take 459.
    std::vector<fedauc::Sample> samples(458407);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i].score = static_cast<double>(i) / 458407.0;
      samples[i].label = i % 5 == 0 ? 1 : 0;
    }
    const fedauc::Dataset d(std::move(samples));
    fedauc::SeededRng rng(3);
    const fedauc::Partition part = fedauc::partition_iid(d, 1000, rng);
    REQUIRE(part.clients() == 1000);
    for (std::size_t c = 0; c < 1000; ++c) {
      CHECK(part.assignments[c].size() == (c < 407 ? 459 : 458));
    }
  }
  SUBCASE("every index appears exactly once") {
    const fedauc::Dataset d = random_dataset(data_rng, 233, 0.3);
    fedauc::SeededRng rng(17);
    const fedauc::Partition part = fedauc::partition_iid(d, 7, rng);
    std::vector<int> seen(d.size(), 0);
    for (const auto& block : part.assignments) {
      for (std::size_t i : block) {
        REQUIRE(i < d.size());
        seen[i] += 1;
      }
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) ==
          static_cast<std::ptrdiff_t>(d.size()));
  }
  SUBCASE("deterministic under the same seed") {
    const fedauc::Dataset d = random_dataset(data_rng, 50, 0.5);
    fedauc::SeededRng a(9), b(9);
    const fedauc::Partition pa = fedauc::partition_iid(d, 4, a);
    const fedauc::Partition pb = fedauc::partition_iid(d, 4, b);
    CHECK(pa.assignments == pb.assignments);
  }
  SUBCASE("argument validation") {
    const fedauc::Dataset d = random_dataset(data_rng, 5, 0.5);
    fedauc::SeededRng rng(1);
    CHECK_THROWS_AS(fedauc::partition_iid(d, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(fedauc::partition_iid(d, 6, rng), std::invalid_argument);
  }
}

TEST_CASE("partition_noniid orders clients by score") {
  fedauc::SeededRng data_rng(23);
  const fedauc::Dataset d = random_dataset(data_rng, 101, 0.4);
  const fedauc::Partition part = fedauc::partition_noniid(d, 4);
  REQUIRE(part.clients() == 4);
  CHECK(part.assignments[0].size() == 26);
  CHECK(part.assignments[3].size() == 25);
  std::vector<int> seen(d.size(), 0);
  double previous_max = -1.0;
  for (const auto& block : part.assignments) {
    REQUIRE(!block.empty());
    double block_min = 2.0, block_max = -1.0;
    for (std::size_t i : block) {
      seen[i] += 1;
      block_min = std::min(block_min, d.samples()[i].score);
      block_max = std::max(block_max, d.samples()[i].score);
    }
    CHECK(block_min >= previous_max);
    previous_max = block_max;
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) ==
        static_cast<std::ptrdiff_t>(d.size()));
}

TEST_CASE("client_threshold_report computes exact local counts") {
  fedauc::SeededRng data_rng(31);
  const fedauc::Dataset d = random_dataset(data_rng, 40, 0.5);
  const fedauc::ThresholdGrid grid = fedauc::ThresholdGrid::uniform(8);

  SUBCASE("noise-free counts match confusion_at and consume no draws") {
    fedauc::SeededRng a(4), b(4);
    const fedauc::ThresholdReport report = fedauc::client_threshold_report(
        d.samples(), 3, grid, 0.0, fedauc::Mechanism::None, 0.0, a);
    CHECK(report.client_id == 3);
    REQUIRE(report.counts.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const fedauc::ConfusionCounts expected =
          fedauc::confusion_at(d, grid.thresholds()[j]);
      CHECK(report.counts[j].tp == expected.tp);
      CHECK(report.counts[j].fp == expected.fp);
      CHECK(report.counts[j].tn == expected.tn);
      CHECK(report.counts[j].fn == expected.fn);
      CHECK(report.counts[j].threshold == grid.thresholds()[j]);
    }
    CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("noise draws follow tp, fp, tn, fn order per threshold") {
    fedauc::SeededRng a(12), b(12);
    const double eps = 0.5;
    const fedauc::ThresholdReport noisy = fedauc::client_threshold_report(
        d.samples(), 0, grid, eps, fedauc::Mechanism::Laplace, 0.0, a);
    fedauc::NoiseSpec spec;
    spec.mechanism = fedauc::Mechanism::Laplace;
    spec.sensitivity = 1.0;
    spec.epsilon = eps;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const fedauc::ConfusionCounts exact =
          fedauc::confusion_at(d, grid.thresholds()[j]);
      CHECK(noisy.counts[j].tp == exact.tp + fedauc::laplace_sample(spec, b));
      CHECK(noisy.counts[j].fp == exact.fp + fedauc::laplace_sample(spec, b));
      CHECK(noisy.counts[j].tn == exact.tn + fedauc::laplace_sample(spec, b));
      CHECK(noisy.counts[j].fn == exact.fn + fedauc::laplace_sample(spec, b));
    }
  }
  SUBCASE("zero-sample client still reports noise-only quadruples") {
    fedauc::SeededRng rng(5);
    const fedauc::ThresholdReport report = fedauc::client_threshold_report(
        {}, 7, grid, 1.0, fedauc::Mechanism::Laplace, 0.0, rng);
    REQUIRE(report.counts.size() == grid.size());
    fedauc::SeededRng replay(5);
    fedauc::NoiseSpec spec;
    spec.mechanism = fedauc::Mechanism::Laplace;
    spec.sensitivity = 1.0;
    spec.epsilon = 1.0;
    CHECK(report.counts[0].tp == fedauc::laplace_sample(spec, replay));
  }
  SUBCASE("gaussian mechanism consumes two draws per statistic") {
    fedauc::SeededRng a(6), b(6);
    (void)fedauc::client_threshold_report(d.samples(), 0,
                                          fedauc::ThresholdGrid({0.5}), 1.0,
                                          fedauc::Mechanism::Gaussian, 1e-6, a);
    for (int i = 0; i < 8; ++i) (void)b.next_u64();
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("server_threshold_aggregate sums client reports") {
  fedauc::SeededRng data_rng(47);
  const fedauc::Dataset d = random_dataset(data_rng, 60, 0.4);
  const fedauc::ThresholdGrid grid = fedauc::ThresholdGrid::uniform(16);

  SUBCASE("noise-free clients reproduce the pooled sweep") {
    fedauc::SeededRng rng(2);
    const fedauc::Partition part = fedauc::partition_iid(d, 5, rng);
    std::vector<fedauc::ThresholdReport> reports;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      std::vector<fedauc::Sample> local;
      for (std::size_t i : part.assignments[c]) {
        local.push_back(d.samples()[i]);
      }
      reports.push_back(fedauc::client_threshold_report(
          local, c, grid, 0.0, fedauc::Mechanism::None, 0.0, rng));
    }
    const fedauc::ThresholdAggregate agg =
        fedauc::server_threshold_aggregate(reports, grid);

    std::vector<fedauc::RatePair> rates;
    for (double theta : grid.thresholds()) {
      rates.push_back(fedauc::tpr_fpr(fedauc::confusion_at(d, theta)));
    }
    const fedauc::CanonicalRoc roc = fedauc::roc_canonicalize(rates);
    CHECK(agg.auc == fedauc::auc_trapezoid(roc.curve));
    CHECK(agg.dropped == roc.dropped);
  }
  SUBCASE("grid mismatch is rejected") {
    fedauc::SeededRng rng(2);
    fedauc::ThresholdReport report = fedauc::client_threshold_report(
        d.samples(), 0, grid, 0.0, fedauc::Mechanism::None, 0.0, rng);
    SUBCASE("wrong length") {
      report.counts.pop_back();
      CHECK_THROWS_AS(fedauc::server_threshold_aggregate({report}, grid),
                      std::invalid_argument);
    }
    SUBCASE("wrong threshold value") {
      report.counts[3].threshold += 0.001;
      CHECK_THROWS_AS(fedauc::server_threshold_aggregate({report}, grid),
                      std::invalid_argument);
    }
  }
}

TEST_CASE("rank reports and aggregation recover the exact auc") {
  fedauc::SeededRng data_rng(59);
  const fedauc::Dataset d = random_dataset(data_rng, 87, 0.35);
  const std::vector<double> ranks = pooled_ranks(d);
  const std::vector<int> labels = pooled_labels(d);
  fedauc::SeededRng rng(8);
  const fedauc::Partition part = fedauc::partition_iid(d, 6, rng);

  SUBCASE("clean reports aggregate to auc_rank exactly") {
    std::vector<fedauc::RankReport> reports;
    double sum_p = 0.0;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(
          fedauc::client_rank_rr_report(part.assignments[c], labels, ranks, c));
      sum_p += reports.back().local_p;
    }
    CHECK(sum_p == static_cast<double>(d.positives()));
    CHECK(fedauc::server_rank_aggregate(reports) == fedauc::auc_rank(d));
    CHECK(fedauc::server_rank_aggregate(reports,
                                        static_cast<double>(d.positives()),
                                        static_cast<double>(d.negatives())) ==
          fedauc::auc_rank(d));
  }
  SUBCASE("local_p counts the flipped labels, not the true ones") {
    std::vector<int> flipped = labels;
    for (std::size_t i = 0; i < flipped.size(); ++i) {
      if (i % 3 == 0) flipped[i] = 1 - flipped[i];
    }
    double sum_p = 0.0, sum_n = 0.0;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      const fedauc::RankReport r =
          fedauc::client_rank_rr_report(part.assignments[c], flipped, ranks, c);
      sum_p += r.local_p;
      sum_n += r.local_n;
    }
    const double expected_p = static_cast<double>(
        std::count(flipped.begin(), flipped.end(), 1));
    CHECK(sum_p == expected_p);
    CHECK(sum_p + sum_n == static_cast<double>(d.size()));
  }
  SUBCASE("out-of-range member index is rejected") {
    CHECK_THROWS_AS(
        fedauc::client_rank_rr_report({d.size()}, labels, ranks, 0),
        std::invalid_argument);
  }
  SUBCASE("aggregate with non-positive noisy counts fails the trial") {
    fedauc::RankReport degenerate;
    degenerate.local_sum = 10.0;
    degenerate.local_p = -0.5;
    degenerate.local_n = 5.0;
    CHECK_THROWS_AS((void)fedauc::server_rank_aggregate({degenerate}),
                    fedauc::TrialFailure);
    fedauc::RankReport no_negatives;
    no_negatives.local_sum = 10.0;
    no_negatives.local_p = 5.0;
    no_negatives.local_n = 0.0;
    CHECK_THROWS_AS((void)fedauc::server_rank_aggregate({no_negatives}),
                    fedauc::TrialFailure);
    CHECK_THROWS_AS(
        (void)fedauc::server_rank_aggregate(std::vector<fedauc::RankReport>{}),
        std::invalid_argument);
  }
}

TEST_CASE("client_rank_laplace_report noise structure") {
  fedauc::SeededRng data_rng(61);
  const fedauc::Dataset d = random_dataset(data_rng, 30, 0.5);
  const std::vector<double> ranks = pooled_ranks(d);
  const std::vector<int> labels = pooled_labels(d);
  std::vector<std::size_t> members = {0, 5, 9, 14, 22};

  SUBCASE("noise_disabled returns the clean report and consumes nothing") {
    fedauc::SeededRng a(3), b(3);
    const fedauc::RankReport noisy = fedauc::client_rank_laplace_report(
        members, labels, ranks, 2, 0.0, 0.0,
        fedauc::SensitivityMode::LocalMaxRank, d.size(), false, true, a);
    const fedauc::RankReport clean =
        fedauc::client_rank_rr_report(members, labels, ranks, 2);
    CHECK(noisy.local_sum == clean.local_sum);
    CHECK(noisy.local_p == clean.local_p);
    CHECK(noisy.local_n == clean.local_n);
    CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("sum noise precedes count noise; local sensitivity is max rank") {
    fedauc::SeededRng a(19), b(19);
    const double eps_sum = 0.7, eps_p = 0.3;
    const fedauc::RankReport noisy = fedauc::client_rank_laplace_report(
        members, labels, ranks, 0, eps_sum, eps_p,
        fedauc::SensitivityMode::LocalMaxRank, d.size(), false, false, a);
    const fedauc::RankReport clean =
        fedauc::client_rank_rr_report(members, labels, ranks, 0);
    double max_rank = 1.0;
    for (std::size_t i : members) max_rank = std::max(max_rank, ranks[i]);
    fedauc::NoiseSpec sum_spec;
    sum_spec.mechanism = fedauc::Mechanism::Laplace;
    sum_spec.sensitivity = max_rank;
    sum_spec.epsilon = eps_sum;
    CHECK(noisy.local_sum ==
          clean.local_sum + fedauc::laplace_sample(sum_spec, b));
    fedauc::NoiseSpec count_spec;
    count_spec.mechanism = fedauc::Mechanism::Laplace;
    count_spec.sensitivity = 1.0;
    count_spec.epsilon = eps_p;
    const double expected_p =
        clean.local_p + fedauc::laplace_sample(count_spec, b);
    CHECK(noisy.local_p == expected_p);
    CHECK(noisy.local_n ==
          static_cast<double>(members.size()) - expected_p);
  }
  SUBCASE("global sensitivity uses M - 1 for every client") {
    fedauc::SeededRng a(20), b(20);
    const fedauc::RankReport noisy = fedauc::client_rank_laplace_report(
        {0}, labels, ranks, 0, 1.0, 0.0,
        fedauc::SensitivityMode::GlobalMminus1, d.size(), true, false, a);
    const fedauc::RankReport clean =
        fedauc::client_rank_rr_report({0}, labels, ranks, 0);
    fedauc::NoiseSpec spec;
    spec.mechanism = fedauc::Mechanism::Laplace;
    spec.sensitivity = static_cast<double>(d.size() - 1);
    spec.epsilon = 1.0;
    CHECK(noisy.local_sum == clean.local_sum + fedauc::laplace_sample(spec, b));
    // exact_counts: the count stays clean and no second draw happens.
    CHECK(noisy.local_p == clean.local_p);
    CHECK(noisy.local_n == clean.local_n);
    CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("rank-0 holder gets the clamped sensitivity 1") {
    // Member holding only the lowest-ranked sample: max rank is 0, clamped
    // to 1 so the Laplace scale stays positive.
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < ranks.size(); ++i) {
      if (ranks[i] < ranks[lowest]) lowest = i;
    }
    fedauc::SeededRng a(21), b(21);
    const fedauc::RankReport noisy = fedauc::client_rank_laplace_report(
        {lowest}, labels, ranks, 0, 2.0, 0.0,
        fedauc::SensitivityMode::LocalMaxRank, d.size(), true, false, a);
    const fedauc::RankReport clean =
        fedauc::client_rank_rr_report({lowest}, labels, ranks, 0);
    fedauc::NoiseSpec spec;
    spec.mechanism = fedauc::Mechanism::Laplace;
    spec.sensitivity = 1.0;
    spec.epsilon = 2.0;
    CHECK(noisy.local_sum == clean.local_sum + fedauc::laplace_sample(spec, b));
  }
}

TEST_CASE("run_protocol validation") {
  fedauc::SeededRng data_rng(71);
  const fedauc::Dataset d = random_dataset(data_rng, 50, 0.5);
  fedauc::SeededRng rng(1);

  fedauc::ProtocolConfig config;
  config.protocol = fedauc::Protocol::ThresholdLaplace;
  config.clients = 5;

  SUBCASE("threshold protocols need a grid") {
    CHECK_THROWS_AS((void)fedauc::run_protocol(config, d, rng),
                    std::invalid_argument);
  }
  SUBCASE("non-positive budget") {
    config.grid = fedauc::ThresholdGrid::uniform(4);
    config.eps_total = 0.0;
    CHECK_THROWS_AS((void)fedauc::run_protocol(config, d, rng),
                    std::invalid_argument);
  }
  SUBCASE("noise_disabled skips budget validation") {
    config.grid = fedauc::ThresholdGrid::uniform(64);
    config.eps_total = -5.0;
    config.noise_disabled = true;
    CHECK_NOTHROW((void)fedauc::run_protocol(config, d, rng));
  }
  SUBCASE("rank-laplace alpha range") {
    config.protocol = fedauc::Protocol::RankLaplace;
    config.alpha = 1.0;
    CHECK_THROWS_AS((void)fedauc::run_protocol(config, d, rng),
                    std::invalid_argument);
    // With exact counts the split is unused, so alpha is not validated.
    config.use_exact_pn = true;
    CHECK_NOTHROW((void)fedauc::run_protocol(config, d, rng));
  }
  SUBCASE("gaussian delta range") {
    config.protocol = fedauc::Protocol::ThresholdGaussian;
    config.grid = fedauc::ThresholdGrid::uniform(4);
    config.gaussian_delta = 0.0;
    CHECK_THROWS_AS((void)fedauc::run_protocol(config, d, rng),
                    std::invalid_argument);
  }
  SUBCASE("single-class dataset") {
    std::vector<fedauc::Sample> all_pos(10);
    for (std::size_t i = 0; i < 10; ++i) {
      all_pos[i] = {static_cast<double>(i) / 10.0, 1};
    }
    config.grid = fedauc::ThresholdGrid::uniform(4);
    CHECK_THROWS_AS(
        (void)fedauc::run_protocol(config, fedauc::Dataset(all_pos), rng),
        std::invalid_argument);
  }
  SUBCASE("more clients than samples") {
    config.grid = fedauc::ThresholdGrid::uniform(4);
    config.clients = 51;
    CHECK_THROWS_AS((void)fedauc::run_protocol(config, d, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("run_protocol noise-free paths recover the exact auc") {
  fedauc::SeededRng data_rng(83);
  const fedauc::Dataset d = random_dataset(data_rng, 600, 0.3);
  const double exact = fedauc::auc_rank(d);

  SUBCASE("rank protocols are exact") {
    for (fedauc::Protocol protocol :
         {fedauc::Protocol::RankRR, fedauc::Protocol::RankLaplace}) {
      fedauc::ProtocolConfig config;
      config.protocol = protocol;
      config.clients = 7;
      config.noise_disabled = true;
      fedauc::SeededRng rng(14);
      CHECK(fedauc::run_protocol(config, d, rng) == exact);
    }
  }
  SUBCASE("threshold sweep lands within discretization error") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::ThresholdLaplace;
    config.grid = fedauc::ThresholdGrid::uniform(1000);
    config.clients = 7;
    config.noise_disabled = true;
    fedauc::SeededRng rng(14);
    CHECK(std::fabs(fedauc::run_protocol(config, d, rng) - exact) < 0.005);
  }
  SUBCASE("noniid partition does not change the noise-free answer") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::RankRR;
    config.clients = 7;
    config.partition_mode = fedauc::PartitionMode::NonIID;
    config.noise_disabled = true;
    fedauc::SeededRng rng(14);
    CHECK(fedauc::run_protocol(config, d, rng) == exact);
  }
}

TEST_CASE("run_protocol at extreme rr budget makes no flips") {
  fedauc::SeededRng data_rng(97);
  const fedauc::Dataset d = random_dataset(data_rng, 400, 0.4);
  const double exact = fedauc::auc_rank(d);

  // At eps = 50 the keep probability saturates to 1 in double precision and
  // the uniform draws are strictly below 1, so no label ever flips.
  fedauc::ProtocolConfig config;
  config.protocol = fedauc::Protocol::RankRR;
  config.clients = 5;
  config.eps_total = 50.0;

  SUBCASE("without the correction the result is exactly clean") {
    config.rr_debias = false;
    fedauc::SeededRng rng(33);
    CHECK(fedauc::run_protocol(config, d, rng) == exact);
  }
  SUBCASE("with the correction the result is clean to rounding") {
    fedauc::SeededRng rng(33);
    CHECK(std::fabs(fedauc::run_protocol(config, d, rng) - exact) <= 1e-12);
  }
}

TEST_CASE("run_protocol replays the documented rng draw order") {
  fedauc::SeededRng data_rng(103);
  const fedauc::Dataset d = random_dataset(data_rng, 120, 0.4);
  const std::vector<double> ranks = pooled_ranks(d);
  const std::vector<int> labels = pooled_labels(d);

  SUBCASE("threshold-laplace: shuffle, then client noise in id order") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::ThresholdLaplace;
    config.grid = fedauc::ThresholdGrid::uniform(10);
    config.eps_total = 2.0;
    config.clients = 4;
    fedauc::SeededRng r1(555), r2(555);
    const double from_protocol = fedauc::run_protocol(config, d, r1);

    const fedauc::Partition part = fedauc::partition_iid(d, 4, r2);
    const double eps_per_stat = 2.0 / (4.0 * 10.0);
    std::vector<fedauc::ThresholdReport> reports;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      std::vector<fedauc::Sample> local;
      for (std::size_t i : part.assignments[c]) {
        local.push_back(d.samples()[i]);
      }
      reports.push_back(fedauc::client_threshold_report(
          local, c, *config.grid, eps_per_stat, fedauc::Mechanism::Laplace,
          0.0, r2));
    }
    CHECK(from_protocol ==
          fedauc::server_threshold_aggregate(reports, *config.grid).auc);
  }

  SUBCASE("rank-rr: shuffle, flips in index order, debias from noisy counts") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::RankRR;
    config.eps_total = 1.5;
    config.clients = 4;
    fedauc::SeededRng r1(777), r2(777);
    const double from_protocol = fedauc::run_protocol(config, d, r1);

    const fedauc::Partition part = fedauc::partition_iid(d, 4, r2);
    const fedauc::RrSpec rr(1.5);
    std::vector<int> flipped(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      flipped[i] = fedauc::rr_flip(labels[i], rr, r2);
    }
    std::vector<fedauc::RankReport> reports;
    double p_bar = 0.0, n_bar = 0.0;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(
          fedauc::client_rank_rr_report(part.assignments[c], flipped, ranks, c));
      p_bar += reports.back().local_p;
      n_bar += reports.back().local_n;
    }
    // Reported positives must recount the flipped labels exactly.
    CHECK(p_bar == static_cast<double>(
                       std::count(flipped.begin(), flipped.end(), 1)));
    const double noisy = fedauc::server_rank_aggregate(reports);
    const fedauc::FlipRates rates = fedauc::FlipRates::symmetric(1.5);
    const double pi = fedauc::estimate_base_rate(p_bar, n_bar, rates).pi_est;
    const fedauc::AlphaBeta ab = fedauc::alpha_beta(pi, rates);
    CHECK(from_protocol == fedauc::debias_auc(noisy, ab.alpha, ab.beta));
  }

  SUBCASE("rank-laplace: split budget, client draws in id order") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::RankLaplace;
    config.eps_total = 2.0;
    config.alpha = 0.75;
    config.clients = 3;
    fedauc::SeededRng r1(999), r2(999);
    const double from_protocol = fedauc::run_protocol(config, d, r1);

    const fedauc::Partition part = fedauc::partition_iid(d, 3, r2);
    const fedauc::BudgetSplit split = fedauc::split_budget(2.0, 0.75);
    std::vector<fedauc::RankReport> reports;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(fedauc::client_rank_laplace_report(
          part.assignments[c], labels, ranks, c, split.eps_sum, split.eps_p,
          fedauc::SensitivityMode::LocalMaxRank, d.size(), false, false, r2));
    }
    CHECK(from_protocol == fedauc::server_rank_aggregate(reports));
  }

  SUBCASE("rank-laplace with exact counts spends everything on the sums") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::RankLaplace;
    config.eps_total = 2.0;
    config.clients = 3;
    config.use_exact_pn = true;
    fedauc::SeededRng r1(1001), r2(1001);
    const double from_protocol = fedauc::run_protocol(config, d, r1);

    const fedauc::Partition part = fedauc::partition_iid(d, 3, r2);
    std::vector<fedauc::RankReport> reports;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(fedauc::client_rank_laplace_report(
          part.assignments[c], labels, ranks, c, 2.0, 0.0,
          fedauc::SensitivityMode::LocalMaxRank, d.size(), true, false, r2));
    }
    CHECK(from_protocol == fedauc::server_rank_aggregate(
                               reports, static_cast<double>(d.positives()),
                               static_cast<double>(d.negatives())));
  }

  SUBCASE("noniid rank-rr consumes no shuffle draws") {
    fedauc::ProtocolConfig config;
    config.protocol = fedauc::Protocol::RankRR;
    config.eps_total = 1.0;
    config.clients = 4;
    config.partition_mode = fedauc::PartitionMode::NonIID;
    config.rr_debias = false;
    fedauc::SeededRng r1(2002), r2(2002);
    const double from_protocol = fedauc::run_protocol(config, d, r1);

    const fedauc::Partition part = fedauc::partition_noniid(d, 4);
    const fedauc::RrSpec rr(1.0);
    std::vector<int> flipped(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      flipped[i] = fedauc::rr_flip(labels[i], rr, r2);
    }
    std::vector<fedauc::RankReport> reports;
    for (std::size_t c = 0; c < part.clients(); ++c) {
      reports.push_back(
          fedauc::client_rank_rr_report(part.assignments[c], flipped, ranks, c));
    }
    CHECK(from_protocol == fedauc::server_rank_aggregate(reports));
  }
}
