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

#include "fedauc/cli.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "fedauc/analysis.hpp"
#include "fedauc/data.hpp"
#include "fedauc/federation.hpp"
#include "fedauc/metrics.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {
namespace cli {

namespace {

// Fixed tag separating the synthetic-data stream from per-cell trial streams.
constexpr std::uint64_t kDataStreamTag = 0xDA7A;

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

ScoreFamily parse_family(const std::string& name) {
  if (name == "beta") return ScoreFamily::BetaPair;
  if (name == "logit") return ScoreFamily::LogitGaussian;
  throw std::invalid_argument("unknown score family: " + name);
}

Protocol parse_protocol(const std::string& name) {
  if (name == "threshold-laplace") return Protocol::ThresholdLaplace;
  if (name == "threshold-gaussian") return Protocol::ThresholdGaussian;
  if (name == "rank-rr") return Protocol::RankRR;
  if (name == "rank-laplace") return Protocol::RankLaplace;
  throw std::invalid_argument("unknown protocol: " + name);
}

PartitionMode parse_partition(const std::string& name) {
  if (name == "iid") return PartitionMode::IID;
  if (name == "noniid") return PartitionMode::NonIID;
  throw std::invalid_argument("unknown partition mode: " + name);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

bool is_threshold(Protocol p) {
  return p == Protocol::ThresholdLaplace || p == Protocol::ThresholdGaussian;
}

struct Cell {
  std::string protocol_name;
  std::string partition_name;
  Protocol protocol = Protocol::ThresholdLaplace;
  PartitionMode partition = PartitionMode::IID;
  double eps = 1.0;
  std::size_t clients = 1;
  std::size_t grid_size = 0;  // 0 for rank protocols
  double alpha = 0.0;         // rank-laplace only
};

}  // namespace

int cmd_gen(const GenOptions& options) {
  SyntheticSpec spec;
  spec.m = options.m;
  spec.base_rate = options.base_rate;
  spec.separation = options.separation;
  spec.family = parse_family(options.family);
  SeededRng rng(options.seed);
  save_csv(gen_synthetic(spec, rng), options.out);
  return 0;
}

int cmd_run(const RunOptions& options) {
  if (options.trials < 1) {
    throw std::invalid_argument("run: trials must be >= 1");
  }
  if (options.workers < 1) {
    throw std::invalid_argument("run: workers must be >= 1");
  }
  if (options.protocols.empty() || options.eps.empty() ||
      options.clients.empty() || options.partitions.empty()) {
    throw std::invalid_argument("run: every sweep axis needs a value");
  }
  for (double e : options.eps) {
    if (!(e > 0.0)) {
      throw std::invalid_argument("run: eps values must be positive");
    }
  }
  for (std::size_t k : options.clients) {
    if (k < 1) throw std::invalid_argument("run: client counts must be >= 1");
  }
  for (double a : options.alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("run: alpha values must lie in (0,1)");
    }
  }
  for (std::size_t g : options.grid_sizes) {
    if (g < 1) throw std::invalid_argument("run: grid sizes must be >= 1");
  }

  // Enumerate the sweep before touching data so bad axes fail fast. The cell
  // order is the deterministic output order.
  std::vector<Cell> cells;
  for (const std::string& protocol_name : options.protocols) {
    const Protocol protocol = parse_protocol(protocol_name);
    for (double eps : options.eps) {
      for (std::size_t clients : options.clients) {
        for (const std::string& partition_name : options.partitions) {
          Cell base;
          base.protocol_name = protocol_name;
          base.partition_name = partition_name;
          base.protocol = protocol;
          base.partition = parse_partition(partition_name);
          base.eps = eps;
          base.clients = clients;
          if (is_threshold(protocol)) {
            if (options.grid_sizes.empty()) {
              throw std::invalid_argument("run: grid sizes must be non-empty");
            }
            for (std::size_t grid_size : options.grid_sizes) {
              Cell cell = base;
              cell.grid_size = grid_size;
              cells.push_back(cell);
            }
          } else if (protocol == Protocol::RankLaplace) {
            if (options.alphas.empty()) {
              throw std::invalid_argument("run: alphas must be non-empty");
            }
            for (double alpha : options.alphas) {
              Cell cell = base;
              cell.alpha = alpha;
              cells.push_back(cell);
            }
          } else {
            cells.push_back(base);
          }
        }
      }
    }
  }

  Dataset dataset;
  if (!options.data.empty()) {
    dataset = load_csv(options.data);
  } else {
    SyntheticSpec spec;
    spec.m = options.synth_m;
    spec.base_rate = options.synth_base_rate;
    spec.separation = options.synth_separation;
    spec.family = parse_family(options.synth_family);
    SeededRng rng(derive_stream_seed(options.seed, kDataStreamTag));
    dataset = gen_synthetic(spec, rng);
  }

  std::vector<ExperimentResult> results(cells.size());
  std::vector<std::string> cell_errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      ProtocolConfig config;
      config.protocol = cell.protocol;
      if (is_threshold(cell.protocol)) {
        config.grid = ThresholdGrid::uniform(cell.grid_size);
      }
      config.eps_total = cell.eps;
      config.alpha = cell.alpha > 0.0 ? cell.alpha : 0.5;
      config.clients = cell.clients;
      config.partition_mode = cell.partition;
      config.noise_disabled = options.no_noise;
      config.gaussian_delta = options.gaussian_delta;
      try {
        results[i] = monte_carlo(config, dataset, options.trials,
                                 derive_stream_seed(options.seed, i));
      } catch (const std::exception& e) {
        cell_errors[i] = e.what();
        results[i].trials = options.trials;
        results[i].failures = options.trials;
      }
    }
  };
  const std::size_t worker_count =
      std::min<std::size_t>(options.workers, cells.size());
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (std::size_t w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::ostringstream out;
  out << "protocol,eps,eps_detail,clients,grid_size,partition,trials,mean,std,"
         "failures,seed\n";
  out << "central,,,,,,0," << format_double(auc_rank(dataset)) << ",0,0,"
      << options.seed << '\n';
  std::size_t successes = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    out << cell.protocol_name << ',' << format_double(cell.eps) << ',';
    if (is_threshold(cell.protocol)) {
      out << format_double(cell.eps /
                           (4.0 * static_cast<double>(cell.grid_size)));
    } else if (cell.protocol == Protocol::RankLaplace) {
      out << format_double(cell.alpha);
    }
    out << ',' << cell.clients << ',';
    if (cell.grid_size > 0) out << cell.grid_size;
    out << ',' << cell.partition_name << ',' << options.trials << ',';
    if (cell_errors[i].empty()) {
      successes += results[i].estimates.size();
      out << format_double(results[i].mean) << ','
          << format_double(results[i].std_dev);
    } else {
      out << ',';
    }
    out << ',' << results[i].failures << ',' << options.seed << '\n';
  }
  write_file(options.out, out.str());
  return successes == 0 && !cells.empty() ? 2 : 0;
}

int cmd_predict(const PredictOptions& options) {
  if (options.trials < 2) {
    throw std::invalid_argument("predict: trials must be >= 2");
  }
  struct PredictCell {
    VarianceFormula formula;
    std::size_t k;
    std::size_t m;
    std::size_t p;
    std::size_t n;
    double eps;
  };
  static const PredictCell kCells[] = {
      {VarianceFormula::LocalLaplace, 100, 100, 50, 50, 1.0},
      {VarianceFormula::LocalLaplace, 100, 100, 50, 50, 4.0},
      {VarianceFormula::LocalLaplace, 1000, 1000, 200, 800, 1.0},
      {VarianceFormula::GlobalLaplace, 10, 100, 50, 50, 1.0},
      {VarianceFormula::GlobalLaplace, 10, 100, 50, 50, 2.0},
      {VarianceFormula::GlobalLaplace, 100, 1000, 500, 500, 1.0},
      {VarianceFormula::RrNoisy, 0, 1000, 200, 800, 0.5},
      {VarianceFormula::RrNoisy, 0, 1000, 200, 800, 1.0},
      {VarianceFormula::RrNoisy, 0, 1000, 200, 800, 2.0},
  };
  std::ostringstream out;
  out << "formula,clients,m,p,n,eps,trials,predicted_std,empirical_std,"
         "relative_error,seed\n";
  std::size_t index = 0;
  for (const PredictCell& cell : kCells) {
    const std::uint64_t cell_seed = derive_stream_seed(options.seed, index++);
    VarianceValidation v;
    const char* name = nullptr;
    switch (cell.formula) {
      case VarianceFormula::LocalLaplace:
        v = validate_local_laplace(cell.k, cell.p, cell.n, cell.eps,
                                   options.trials, cell_seed);
        name = "local-laplace";
        break;
      case VarianceFormula::GlobalLaplace:
        v = validate_global_laplace(cell.k, cell.m, cell.p, cell.n, cell.eps,
                                    options.trials, cell_seed);
        name = "global-laplace";
        break;
      case VarianceFormula::RrNoisy:
        v = validate_rr_noisy(cell.m, cell.p, cell.n, cell.eps,
                              options.trials, cell_seed);
        name = "rr-noisy";
        break;
    }
    out << name << ',';
    if (cell.k > 0) out << cell.k;
    out << ',' << cell.m << ',' << cell.p << ',' << cell.n << ','
        << format_double(cell.eps) << ',' << options.trials << ','
        << format_double(v.predicted.std_dev) << ','
        << format_double(v.empirical_std) << ','
        << format_double(v.relative_error) << ',' << options.seed << '\n';
  }
  write_file(options.out, out.str());
  return 0;
}

namespace {

std::string derive_density_path(const std::string& out) {
  const std::size_t dot = out.find_last_of('.');
  const std::size_t slash = out.find_last_of('/');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return out + ".density.csv";
  }
  return out.substr(0, dot) + ".density" + out.substr(dot);
}

}  // namespace

int cmd_attack(const AttackOptions& options) {
  if (options.data.empty()) {
    throw std::invalid_argument("attack: --data is required");
  }
  if (options.k.empty()) {
    throw std::invalid_argument("attack: k list must be non-empty");
  }
  const Dataset dataset = load_csv(options.data);

  std::ostringstream out;
  out << "k,true_positives,precision,recall\n";
  for (std::size_t k : options.k) {
    const AttackResult r = topk_attack(dataset, k);
    out << r.k << ',' << r.true_positives_in_topk << ','
        << format_double(r.precision) << ',' << format_double(r.recall)
        << '\n';
  }
  write_file(options.out, out.str());

  const ScoreDensity density = score_density(dataset, options.bins);
  std::ostringstream dens;
  dens << "bin_low,bin_high,positive,negative\n";
  for (std::size_t b = 0; b < options.bins; ++b) {
    dens << format_double(static_cast<double>(b) /
                          static_cast<double>(options.bins))
         << ','
         << format_double(static_cast<double>(b + 1) /
                          static_cast<double>(options.bins))
         << ',' << format_double(density.positive[b]) << ','
         << format_double(density.negative[b]) << '\n';
  }
  const std::string density_path = options.density_out.empty()
                                       ? derive_density_path(options.out)
                                       : options.density_out;
  write_file(density_path, dens.str());
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Label-private AUC evaluation for federated binary classifiers"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI config file with one section per subcommand; explicit "
                 "flags override config values");

  GenOptions gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Generate a synthetic scored dataset CSV");
  gen_cmd->configurable()->fallthrough();
  gen_cmd->add_option("--m", gen.m, "Sample count")->capture_default_str();
  gen_cmd->add_option("--base-rate", gen.base_rate, "Positive fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--separation", gen.separation, "Class separation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_cmd->add_option("--family", gen.family, "Score family")
      ->check(CLI::IsMember({"logit", "beta"}))
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV path")
      ->capture_default_str();

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Sweep protocol settings and emit per-cell Monte Carlo results");
  run_cmd->configurable()->fallthrough();
  run_cmd->add_option("--data", run.data,
                      "Dataset CSV; omit to draw the synthetic source below");
  run_cmd->add_option("--synth-m", run.synth_m)->capture_default_str();
  run_cmd->add_option("--synth-base-rate", run.synth_base_rate)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  run_cmd->add_option("--synth-separation", run.synth_separation)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  run_cmd->add_option("--synth-family", run.synth_family)
      ->check(CLI::IsMember({"logit", "beta"}))
      ->capture_default_str();
  run_cmd
      ->add_option("--protocols", run.protocols,
                   "threshold-laplace, threshold-gaussian, rank-rr, "
                   "rank-laplace")
      ->delimiter(',')
      ->check(CLI::IsMember({"threshold-laplace", "threshold-gaussian",
                             "rank-rr", "rank-laplace"}));
  run_cmd->add_option("--eps", run.eps, "Total budgets to sweep")
      ->delimiter(',');
  run_cmd->add_option("--clients", run.clients, "Client counts to sweep")
      ->delimiter(',');
  run_cmd
      ->add_option("--grid-sizes", run.grid_sizes,
                   "Threshold grid sizes (threshold protocols)")
      ->delimiter(',');
  run_cmd
      ->add_option("--alphas", run.alphas,
                   "Rank-sum budget shares (rank-laplace)")
      ->delimiter(',');
  run_cmd->add_option("--partitions", run.partitions, "iid, noniid")
      ->delimiter(',')
      ->check(CLI::IsMember({"iid", "noniid"}));
  run_cmd->add_option("--trials", run.trials)->capture_default_str();
  run_cmd->add_option("--seed", run.seed)->capture_default_str();
  run_cmd->add_option("--out", run.out)->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Concurrent grid cells")
      ->capture_default_str();
  run_cmd->add_flag("--no-noise", run.no_noise,
                    "Run every cell with noise disabled (diagnostics)");
  run_cmd->add_option("--gaussian-delta", run.gaussian_delta)
      ->capture_default_str();

  PredictOptions predict;
  CLI::App* predict_cmd = app.add_subcommand(
      "predict",
      "Evaluate closed-form variance predictors against Monte Carlo");
  predict_cmd->configurable()->fallthrough();
  predict_cmd->add_option("--trials", predict.trials)->capture_default_str();
  predict_cmd->add_option("--seed", predict.seed)->capture_default_str();
  predict_cmd->add_option("--out", predict.out)->capture_default_str();

  AttackOptions attack;
  CLI::App* attack_cmd = app.add_subcommand(
      "attack", "Top-k label inference and per-class score densities");
  attack_cmd->configurable()->fallthrough();
  attack_cmd->add_option("--data", attack.data, "Dataset CSV")->required();
  attack_cmd->add_option("--k", attack.k, "Attack sizes")->delimiter(',');
  attack_cmd->add_option("--bins", attack.bins, "Density histogram bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  attack_cmd->add_option("--out", attack.out)->capture_default_str();
  attack_cmd->add_option("--density-out", attack.density_out,
                         "Density CSV path (default <out stem>.density.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (run_cmd->parsed()) return cmd_run(run);
    if (predict_cmd->parsed()) return cmd_predict(predict);
    if (attack_cmd->parsed()) return cmd_attack(attack);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cli
}  // namespace fedauc
