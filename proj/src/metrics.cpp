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

#include "fedauc/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fedauc {

ThresholdGrid ThresholdGrid::uniform(std::size_t size) {
  if (size == 0) {
    throw std::invalid_argument("ThresholdGrid: size must be >= 1");
  }
  std::vector<double> thresholds(size);
  for (std::size_t j = 0; j < size; ++j) {
    thresholds[j] = static_cast<double>(j + 1) / static_cast<double>(size);
  }
  return ThresholdGrid(std::move(thresholds));
}

ThresholdGrid::ThresholdGrid(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty()) {
    throw std::invalid_argument("ThresholdGrid: must not be empty");
  }
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    if (!(thresholds_[j] > 0.0 && thresholds_[j] <= 1.0)) {
      throw std::invalid_argument("ThresholdGrid: values must lie in (0, 1]");
    }
    if (j > 0 && !(thresholds_[j] > thresholds_[j - 1])) {
      throw std::invalid_argument(
          "ThresholdGrid: values must be strictly increasing");
    }
  }
}

ConfusionCounts confusion_at(const Dataset& dataset, double threshold) {
  ConfusionCounts counts;
  counts.threshold = threshold;
  for (const Sample& s : dataset.samples()) {
    const bool predicted_positive = s.score >= threshold;
    if (s.label == 1) {
      (predicted_positive ? counts.tp : counts.fn) += 1.0;
    } else {
      (predicted_positive ? counts.fp : counts.tn) += 1.0;
    }
  }
  return counts;
}

RatePair tpr_fpr(const ConfusionCounts& counts) {
  RatePair rates;
  const double pos = counts.tp + counts.fn;
  const double neg = counts.fp + counts.tn;
  if (pos > 0.0) rates.tpr = counts.tp / pos;
  if (neg > 0.0) rates.fpr = counts.fp / neg;
  return rates;
}

CanonicalRoc roc_canonicalize(const std::vector<RatePair>& raw_points) {
  CanonicalRoc out;
  out.curve.points.reserve(raw_points.size() + 2);
  for (const RatePair& rp : raw_points) {
    if (!rp.fpr.has_value() || !rp.tpr.has_value()) {
      ++out.dropped;
      continue;
    }
    out.curve.points.push_back({std::clamp(*rp.fpr, 0.0, 1.0),
                                std::clamp(*rp.tpr, 0.0, 1.0)});
  }
  out.curve.points.push_back({0.0, 0.0});
  out.curve.points.push_back({1.0, 1.0});
  std::sort(out.curve.points.begin(), out.curve.points.end(),
            [](const RocPoint& a, const RocPoint& b) {
              return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
            });
  return out;
}

double auc_trapezoid(const RocCurve& curve) {
  if (curve.points.size() < 2) {
    throw std::invalid_argument("auc_trapezoid: need at least two points");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

std::vector<double> rank_scores(const std::vector<double>& scores) {
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> ranks(m, 0.0);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && scores[order[j + 1]] == scores[order[i]]) ++j;
    // Positions i..j hold one tie group; each member gets the mean position.
    const double mean_rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

void require_both_classes(const Dataset& dataset, const char* who) {
  if (dataset.positives() == 0 || dataset.negatives() == 0) {
    throw std::invalid_argument(std::string(who) +
                                ": dataset needs at least one sample of each class");
  }
}

}  // namespace

double auc_rank(const Dataset& dataset) {
  require_both_classes(dataset, "auc_rank");
  std::vector<double> scores;
  scores.reserve(dataset.size());
  for (const Sample& s : dataset.samples()) scores.push_back(s.score);
  const std::vector<double> ranks = rank_scores(scores);
  double positive_rank_sum = 0.0;
  const auto& samples = dataset.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label == 1) positive_rank_sum += ranks[i];
  }
  const double p = static_cast<double>(dataset.positives());
  const double n = static_cast<double>(dataset.negatives());
  return (positive_rank_sum - p * (p - 1.0) / 2.0) / (p * n);
}

double auc_pairwise(const Dataset& dataset) {
  require_both_classes(dataset, "auc_pairwise");
  std::vector<double> pos;
  std::vector<double> neg;
  pos.reserve(dataset.positives());
  neg.reserve(dataset.negatives());
  for (const Sample& s : dataset.samples()) {
    (s.label == 1 ? pos : neg).push_back(s.score);
  }
  double credit = 0.0;
  for (double sp : pos) {
    for (double sn : neg) {
      if (sp > sn) {
        credit += 1.0;
      } else if (sp == sn) {
        credit += 0.5;
      }
    }
  }
  return credit / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace fedauc
