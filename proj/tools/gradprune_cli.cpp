// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradprune/errors.hpp"
#include "gradprune/harness/ablation.hpp"
#include "gradprune/harness/checkpoint.hpp"
#include "gradprune/harness/config.hpp"
#include "gradprune/harness/dataset.hpp"
#include "gradprune/harness/experiment.hpp"
#include "gradprune/harness/report.hpp"
#include "gradprune/prune/schedule.hpp"

namespace {

using namespace gradprune;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

ExperimentConfig build_config(const std::string& config_path,
                              const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_config_file(config_path);
  for (const auto& kv : overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg = build_config(config_path, overrides);
  MetricsLog log = run_experiment(cfg);
  std::cout << "final sparsity: " << log.final_sparsity << " (" << log.final_active
            << "/" << log.dense_count << " active)\n";
  std::cout << "final test accuracy: " << log.final_test_accuracy << "\n";
  std::cout << "best test accuracy: " << log.best_test_accuracy << "\n";
  std::cout << "wall seconds: " << log.wall_seconds << "\n";
  if (!cfg.metrics_path.empty()) std::cout << "metrics: " << cfg.metrics_path << "\n";
  if (!cfg.checkpoint_path.empty()) {
    std::cout << "checkpoint: " << cfg.checkpoint_path << "\n";
  }
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& orders, const std::string& rates,
               const std::string& seeds) {
  ExperimentConfig cfg = build_config(config_path, overrides);
  AblationGrid grid;
  if (!orders.empty()) grid.orders = split(orders, ',');
  if (!rates.empty()) {
    grid.rates.clear();
    for (const auto& tok : split(rates, ',')) {
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("--rates expects mode:value entries, got '" + tok + "'");
      }
      grid.rates.emplace_back(tok.substr(0, colon), std::stod(tok.substr(colon + 1)));
    }
  }
  if (!seeds.empty()) {
    grid.seeds.clear();
    for (const auto& tok : split(seeds, ',')) grid.seeds.push_back(std::stoull(tok));
  }
  AblationResult result = run_ablation(cfg, grid);
  std::cout << result.summary_text();
  return 0;
}

int cmd_schedule(double s_ini, double s_fin, std::int64_t t_ini, std::int64_t t_fin,
                 std::int64_t delta_t, std::size_t n_dense) {
  PruneSchedule sched(s_ini, s_fin, t_ini, t_fin, delta_t);
  std::cout << "t\tsparsity\ttarget\n";
  for (const auto& row : dump_schedule(sched, n_dense)) {
    std::cout << row.t << "\t" << row.sparsity << "\t" << row.target << "\n";
  }
  return 0;
}

int cmd_report(const std::string& checkpoint_path) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  Network net(parse_layer_list(ck.model), ck.input_shape);
  net.params() = ck.params;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < ck.mask.size(); ++i) {
    if (ck.mask[i]) kept.push_back(i);
  }
  SparsityMask mask = SparsityMask::from_kept_indices(ck.mask.size(), kept);
  std::cout << "model: " << ck.model << "\n";
  std::cout << "iteration: " << ck.iter << " (epoch " << ck.epoch << ")\n";
  std::cout << report_layer_sparsity(net, mask).text();
  return 0;
}

int cmd_gen_data(std::size_t classes, std::size_t train_per_class,
                 std::size_t test_per_class, const std::string& shape, double margin,
                 std::uint64_t seed, const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.data.kind = DatasetKind::Synthetic;
  cfg.data.classes = classes;
  cfg.data.train_per_class = train_per_class;
  cfg.data.test_per_class = test_per_class;
  apply_config_entry(cfg, "input_shape", shape);
  cfg.data.margin = margin;
  cfg.seed = seed;
  validate(cfg);
  DataSplits data = load_configured_data(cfg);
  write_idx(data.train, out_dir + "/train-images.idx", out_dir + "/train-labels.idx");
  write_idx(data.test, out_dir + "/test-images.idx", out_dir + "/test-labels.idx");
  std::cout << "wrote " << data.train.size() << " train and " << data.test.size()
            << " test samples under " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradual-pruning sparse training experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* train = app.add_subcommand("train", "run one experiment");
  train->add_option("-c,--config", config_path, "key=value config file");
  train->add_option("-D,--set", overrides,
                    "config override key=value (repeatable, wins over the file)");

  auto* ablate = app.add_subcommand("ablate", "run an (order x rate x seed) grid");
  std::string orders, rates, seeds;
  ablate->add_option("-c,--config", config_path, "key=value config file");
  ablate->add_option("-D,--set", overrides, "config override key=value");
  ablate->add_option("--orders", orders, "comma list, e.g. gradient_first,magnitude_first");
  ablate->add_option("--rates", rates, "comma list of mode:value, e.g. fixed:0.5,cosine:0.5");
  ablate->add_option("--seeds", seeds, "comma list of seeds, e.g. 1,2,3");

  auto* schedule = app.add_subcommand("schedule", "print the sparsity schedule table");
  double s_ini = 0.0, s_fin = 0.9;
  std::int64_t t_ini = 0, t_fin = 10000, delta_t = 1000;
  std::size_t n_dense = 100000;
  schedule->add_option("--s-ini", s_ini, "initial sparsity");
  schedule->add_option("--s-fin", s_fin, "final sparsity");
  schedule->add_option("--t-ini", t_ini, "first eligible iteration");
  schedule->add_option("--t-fin", t_fin, "last prune iteration");
  schedule->add_option("--delta-t", delta_t, "iterations between prune events");
  schedule->add_option("--n-dense", n_dense, "dense parameter count");

  auto* report = app.add_subcommand("report", "per-layer sparsity of a checkpoint");
  std::string checkpoint_path;
  report->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();

  auto* gen = app.add_subcommand("gen-data", "write synthetic IDX fixtures");
  std::size_t classes = 10, train_per_class = 1000, test_per_class = 100;
  std::string shape = "1x28x28", out_dir = ".";
  double margin = 2.0;
  std::uint64_t seed = 1;
  gen->add_option("--classes", classes, "number of classes");
  gen->add_option("--train-per-class", train_per_class, "train samples per class");
  gen->add_option("--test-per-class", test_per_class, "test samples per class");
  gen->add_option("--shape", shape, "sample shape CxHxW (C must be 1 for IDX)");
  gen->add_option("--margin", margin, "class separation margin");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out-dir", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(config_path, overrides);
    if (*ablate) return cmd_ablate(config_path, overrides, orders, rates, seeds);
    if (*schedule) return cmd_schedule(s_ini, s_fin, t_ini, t_fin, delta_t, n_dense);
    if (*report) return cmd_report(checkpoint_path);
    if (*gen) {
      return cmd_gen_data(classes, train_per_class, test_per_class, shape, margin,
                          seed, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
