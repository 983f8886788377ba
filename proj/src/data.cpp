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

#include "fedauc/data.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedauc {

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.m < 2) {
    throw std::invalid_argument("gen_synthetic: m must be >= 2");
  }
  if (!(spec.base_rate > 0.0 && spec.base_rate < 1.0)) {
    throw std::invalid_argument("gen_synthetic: base_rate must lie in (0,1)");
  }
  if (!(spec.separation >= 0.0) || !std::isfinite(spec.separation)) {
    throw std::invalid_argument(
        "gen_synthetic: separation must be non-negative");
  }
  const double md = static_cast<double>(spec.m);
  if (spec.base_rate * md < 1.0 || (1.0 - spec.base_rate) * md < 1.0) {
    throw std::invalid_argument(
        "gen_synthetic: expected class counts must each be >= 1");
  }
}

double sample_score(ScoreFamily family, int label, double separation,
                    SeededRng& rng) {
  if (family == ScoreFamily::BetaPair) {
    // Beta(1+s, 1) for positives and Beta(1, 1+s) for negatives, both via
    // closed-form inverse CDF so one uniform drives one score.
    const double shape = 1.0 + separation;
    const double x = std::pow(rng.next_unit(), 1.0 / shape);
    return label == 1 ? x : 1.0 - x;
  }
  // LogitGaussian: standard normal via Box-Muller (two uniforms), shifted by
  // +-separation/2 per class, squashed through the logistic function.
  const double u1 = rng.next_unit();
  const double u2 = rng.next_unit();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  const double mean = (label == 1 ? 0.5 : -0.5) * separation;
  return 1.0 / (1.0 + std::exp(-(z + mean)));
}

Dataset draw_once(const SyntheticSpec& spec, SeededRng& rng) {
  std::vector<Sample> samples(spec.m);
  for (Sample& s : samples) {
    s.label = rng.next_unit() < spec.base_rate ? 1 : 0;
    s.score = sample_score(spec.family, s.label, spec.separation, rng);
  }
  return Dataset(std::move(samples));
}

}  // namespace

Dataset gen_synthetic(const SyntheticSpec& spec, SeededRng& rng) {
  check_spec(spec);
  Dataset dataset = draw_once(spec, rng);
  if (dataset.positives() == 0 || dataset.negatives() == 0) {
    dataset = draw_once(spec, rng);
    if (dataset.positives() == 0 || dataset.negatives() == 0) {
      throw std::runtime_error(
          "gen_synthetic: drew a single-class dataset twice; grow m or move "
          "base_rate away from the edge");
    }
  }
  return dataset;
}

namespace {

[[noreturn]] void malformed(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw std::runtime_error("load_csv: " + path + " line " +
                           std::to_string(line_no) + ": " + what);
}

// Full-string strtod; returns false when the field is not a plain number.
bool parse_double(const std::string& field, double* out) {
  if (field.empty()) return false;
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + field.size()) return false;
  *out = value;
  return true;
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_csv: cannot open " + path);
  }
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool first_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      malformed(path, line_no, "expected two comma-separated fields");
    }
    if (line.find(',', comma + 1) != std::string::npos) {
      malformed(path, line_no, "expected exactly one comma");
    }
    const std::string score_field = line.substr(0, comma);
    const std::string label_field = line.substr(comma + 1);
    double score = 0.0;
    if (!parse_double(score_field, &score)) {
      if (first_line) {
        first_line = false;  // header row
        continue;
      }
      malformed(path, line_no, "score is not a number: " + score_field);
    }
    first_line = false;
    if (!(score >= 0.0 && score <= 1.0)) {
      malformed(path, line_no, "score outside [0,1]: " + score_field);
    }
    double label_value = 0.0;
    if (!parse_double(label_field, &label_value) ||
        (label_value != 0.0 && label_value != 1.0)) {
      malformed(path, line_no, "label must be 0 or 1: " + label_field);
    }
    samples.push_back({score, static_cast<int>(label_value)});
  }
  return Dataset(std::move(samples));
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_csv: cannot open " + path);
  }
  out << "score,label\n";
  char buffer[64];
  for (const Sample& s : dataset.samples()) {
    // 17 significant digits round-trip any double exactly.
    std::snprintf(buffer, sizeof buffer, "%.17g", s.score);
    out << buffer << ',' << s.label << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("save_csv: write failed: " + path);
  }
}

}  // namespace fedauc
