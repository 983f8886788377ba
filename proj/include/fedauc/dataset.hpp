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

#ifndef FEDAUC_DATASET_HPP
#define FEDAUC_DATASET_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fedauc {

// One scored example. Ingested scores live in [0, 1] (enforced at the file
// and generator boundaries); scores produced by perturbation are unbounded.
struct Sample {
  double score = 0.0;
  int label = 0;  // 0 or 1
};

// Immutable labeled score collection. Validates labels and score finiteness
// on construction and caches the positive count. May be empty; operations
// that need both classes present check for themselves.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
    std::size_t positives = 0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const Sample& s = samples_[i];
      if (s.label != 0 && s.label != 1) {
        throw std::invalid_argument("Dataset: label at index " +
                                    std::to_string(i) + " is not 0 or 1");
      }
      if (!std::isfinite(s.score)) {
        throw std::invalid_argument("Dataset: score at index " +
                                    std::to_string(i) + " is not finite");
      }
      positives += static_cast<std::size_t>(s.label);
    }
    positives_ = positives;
  }

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return samples_.size() - positives_; }

 private:
  std::vector<Sample> samples_;
  std::size_t positives_ = 0;
};

}  // namespace fedauc

#endif  // FEDAUC_DATASET_HPP
