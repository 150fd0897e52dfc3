// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/ablation.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gradprune/errors.hpp"
#include "gradprune/harness/experiment.hpp"
#include "gradprune/prune/policy.hpp"

namespace gradprune {

namespace {

std::string short_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cell_tag(const std::string& order, const std::string& mode, double rate,
                     std::uint64_t seed) {
  std::string o = order == "gradient_first" ? "gf" : "mf";
  return o + "_" + mode + "_r" + short_double(rate) + "_s" + std::to_string(seed);
}

/// inserts "." + tag before the final extension (or appends when none).
std::string tagged_path(const std::string& path, const std::string& tag) {
  if (path.empty()) return path;
  std::size_t slash = path.find_last_of('/');
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "." + tag;
  }
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

}  // namespace

AblationResult run_ablation(const ExperimentConfig& base, const AblationGrid& grid) {
  if (grid.orders.empty() || grid.rates.empty() || grid.seeds.empty()) {
    throw ConfigError("ablation grid: every axis needs at least one entry");
  }
  for (const auto& o : grid.orders) parse_ordering(o);
  for (const auto& r : grid.rates) parse_rate_mode(r.first);

  AblationResult result;
  for (const auto& order : grid.orders) {
    for (const auto& [mode, rate] : grid.rates) {
      std::vector<double> accs;
      for (std::uint64_t seed : grid.seeds) {
        AblationCellResult cell;
        cell.order = order;
        cell.rate_mode = mode;
        cell.rate = rate;
        cell.seed = seed;
        ExperimentConfig cfg = base;
        cfg.order = order;
        cfg.rate_mode = mode;
        cfg.rate = rate;
        cfg.seed = seed;
        const std::string tag = cell_tag(order, mode, rate, seed);
        cfg.metrics_path = tagged_path(base.metrics_path, tag);
        cfg.checkpoint_path = tagged_path(base.checkpoint_path, tag);
        try {
          cell.log = run_experiment(cfg);
          cell.ok = true;
          accs.push_back(cell.log.final_test_accuracy);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
      }
      AblationSummaryRow row;
      row.order = order;
      row.rate_mode = mode;
      row.rate = rate;
      row.runs = accs.size();
      if (!accs.empty()) {
        double sum = 0.0;
        for (double a : accs) sum += a;
        row.mean_acc = sum / double(accs.size());
        if (accs.size() > 1) {
          double ss = 0.0;
          for (double a : accs) ss += (a - row.mean_acc) * (a - row.mean_acc);
          row.std_acc = std::sqrt(ss / double(accs.size() - 1));
        }
      }
      result.summary.push_back(row);
    }
  }
  return result;
}

std::string AblationResult::summary_text() const {
  std::ostringstream out;
  out << "order\trate_mode\trate\truns\tmean_acc\tstd_acc\n";
  for (const auto& row : summary) {
    out << row.order << "\t" << row.rate_mode << "\t" << short_double(row.rate)
        << "\t" << row.runs << "\t" << std::fixed << std::setprecision(4)
        << row.mean_acc << "\t" << row.std_acc << "\n";
    out.unsetf(std::ios::fixed);
  }
  bool any_failed = false;
  for (const auto& cell : cells) {
    if (!cell.ok) {
      if (!any_failed) {
        out << "failed cells:\n";
        any_failed = true;
      }
      out << "  " << cell.order << "/" << cell.rate_mode << "/r="
          << short_double(cell.rate) << "/seed=" << cell.seed << ": " << cell.error
          << "\n";
    }
  }
  return out.str();
}

}  // namespace gradprune
