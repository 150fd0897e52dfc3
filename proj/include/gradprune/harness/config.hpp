// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_CONFIG_HPP
#define GRADPRUNE_HARNESS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gradprune {

enum class DatasetKind { Synthetic, Idx, Cifar10 };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::Synthetic;
  // kind == Idx
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  // kind == Cifar10 (binary batch files)
  std::vector<std::string> train_bins;
  std::vector<std::string> test_bins;
  // kind == Synthetic
  std::size_t classes = 10;
  std::size_t train_per_class = 400;
  std::size_t test_per_class = 100;
  std::vector<std::size_t> shape = {1, 28, 28};  // {C, H, W}
  double margin = 2.0;
};

/// Full description of one training-with-pruning run. Every field can be set
/// from a flat key=value config file or a CLI override (overrides win).
struct ExperimentConfig {
  std::string model = "mlp(256-128-10)";
  DatasetConfig data;

  std::size_t epochs = 160;
  std::size_t batch_size = 128;
  double lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  std::vector<std::size_t> lr_decay_epochs = {80, 120};
  double lr_decay_factor = 0.1;

  double s_ini = 0.0;
  double s_fin = 0.9;
  double prune_stop_fraction = 0.8;
  std::size_t delta_t = 1000;

  std::string order = "gradient_first";
  std::string rate_mode = "fixed";
  double rate = 0.5;

  bool augment_hflip = false;
  std::uint64_t seed = 1;

  // Empty paths suppress the corresponding output file.
  std::string metrics_path;
  std::string checkpoint_path;
};

/// Sets one configuration entry by key. Unknown keys and malformed values
/// raise ConfigError naming the key.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// Reads a flat key=value file ('#' comments, blank lines ignored) on top of
/// the built-in defaults.
ExperimentConfig load_config_file(const std::string& path);

/// Rejects invalid field values with field-level messages. Called before any
/// training starts.
void validate(const ExperimentConfig& cfg);

/// Canonical key=value rendering of every field, one per line, fixed order.
/// Reading it back with apply_config_entry reproduces the config.
std::string config_text(const ExperimentConfig& cfg);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_CONFIG_HPP
