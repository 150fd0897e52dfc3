// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_ABLATION_HPP
#define GRADPRUNE_HARNESS_ABLATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gradprune/harness/config.hpp"
#include "gradprune/harness/metrics.hpp"

namespace gradprune {

/// Cell axes: every (order, rate) pair runs once per seed.
struct AblationGrid {
  std::vector<std::string> orders = {"gradient_first", "magnitude_first"};
  std::vector<std::pair<std::string, double>> rates = {{"fixed", 0.5},
                                                       {"cosine", 0.5}};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
};

struct AblationCellResult {
  std::string order;
  std::string rate_mode;
  double rate = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // set when !ok
  MetricsLog log;
};

/// Per-(order, rate) aggregate over the seeds that completed.
struct AblationSummaryRow {
  std::string order;
  std::string rate_mode;
  double rate = 0.0;
  std::size_t runs = 0;
  double mean_acc = 0.0;
  double std_acc = 0.0;  // sample standard deviation, 0 when runs < 2
};

struct AblationResult {
  std::vector<AblationCellResult> cells;
  std::vector<AblationSummaryRow> summary;

  /// Tab-delimited summary table; failed cells listed afterwards.
  std::string summary_text() const;
};

/// Runs every grid cell serially in declaration order (orders outer, rates,
/// then seeds). A failing cell is recorded with its error and the grid
/// continues. When base.metrics_path / base.checkpoint_path are set, each
/// cell writes its own file with an order/rate/seed tag before the
/// extension.
AblationResult run_ablation(const ExperimentConfig& base, const AblationGrid& grid);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_ABLATION_HPP
