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
// Synthetic dataset generation with controllable separation, and CSV
// ingestion/serialization (the artifact's dataset interchange format).

#ifndef FEDAUC_DATA_HPP
#define FEDAUC_DATA_HPP

#include <cstddef>
#include <string>

#include "fedauc/dataset.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

// BetaPair: positives ~ Beta(1+separation, 1), negatives ~ Beta(1, 1+separation),
// both sampled by closed-form inverse CDF (one uniform per score).
// LogitGaussian: class-conditional normals at +-separation/2 squashed through
// the logistic function (two uniforms per score via Box-Muller).
// separation = 0 makes the classes exchangeable in both families.
enum class ScoreFamily { BetaPair, LogitGaussian };

struct SyntheticSpec {
  std::size_t m = 2;            // >= 2
  double base_rate = 0.5;       // pi, in (0, 1); pi*m and (1-pi)*m must be >= 1
  double separation = 1.0;      // >= 0
  ScoreFamily family = ScoreFamily::LogitGaussian;
};

// Labels drawn Bernoulli(base_rate), scores from the class-conditional
// family. Per sample the label uniform is drawn first, then the score draws.
// A degenerate result (P = 0 or N = 0) is resampled once from the continuing
// stream; a second degenerate draw throws std::runtime_error.
Dataset gen_synthetic(const SyntheticSpec& spec, SeededRng& rng);

// Two-column CSV: score,label. Optional header row (detected by a
// non-numeric first field). Scores must lie in [0, 1], labels in {0, 1};
// violations and malformed rows raise std::runtime_error naming the line.
Dataset load_csv(const std::string& path);

// Writes a header row then one row per sample with scores at 17 significant
// digits, so save followed by load reproduces the dataset exactly.
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace fedauc

#endif  // FEDAUC_DATA_HPP
