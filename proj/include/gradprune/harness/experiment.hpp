// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_EXPERIMENT_HPP
#define GRADPRUNE_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gradprune/harness/config.hpp"
#include "gradprune/harness/dataset.hpp"
#include "gradprune/harness/metrics.hpp"
#include "gradprune/netcore/layers.hpp"
#include "gradprune/netcore/network.hpp"
#include "gradprune/prune/mask.hpp"

namespace gradprune {

struct DataSplits {
  Dataset train;
  Dataset test;
};

/// Materializes the configured dataset (synthetic splits share class means
/// between train and test; only the noise differs).
DataSplits load_configured_data(const ExperimentConfig& cfg);

/// Expands a model descriptor into a concrete layer stack for the given
/// sample shape. Accepted forms:
///   mlp(256-128-10)                      flatten + ReLU MLP, sizes as given
///   cnn(16-32-10)                        3x3 stride-2 convs + ReLU, then FC
///   flatten,fc(256),relu,fc(10)          layer DSL with inferred fan-ins;
///     conv(OC,KHxKW[,sS][,pP][,nb]) and fc(OUT[,nb]) (nb = no bias)
///   fc(784->256,b),relu,...              fully explicit canonical form
std::vector<LayerSpec> parse_model(const std::string& descriptor,
                                   const std::vector<std::size_t>& sample_shape);

/// Training-data order for one epoch; a pure function of (seed, epoch, n).
std::vector<std::size_t> epoch_permutation(std::uint64_t seed, std::size_t epoch,
                                           std::size_t n);

/// Top-1 accuracy over the dataset in its stored order.
double evaluate(const Network& net, const SparsityMask& mask, const Dataset& ds);

/// Runs one full training-with-pruning experiment:
///   - all-ones mask when s_ini = 0, ERK-allocated random sparse mask otherwise
///   - per iteration: backward pass, prune event when t is a multiple of
///     delta_t and t <= t_fin, then the SGD step
///   - t_fin is the last multiple of delta_t within the first
///     prune_stop_fraction of all iterations; the rest fine-tunes with the
///     mask frozen, ending at sparsity s_fin exactly
///   - learning-rate decay applied at epoch boundaries
/// Emits metrics (and optionally a checkpoint) per the config paths. On
/// error, whatever was logged has already been flushed before the exception
/// propagates.
MetricsLog run_experiment(const ExperimentConfig& cfg);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_EXPERIMENT_HPP
