// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_NETCORE_OPTIM_HPP
#define GRADPRUNE_NETCORE_OPTIM_HPP

#include <cstddef>
#include <vector>

#include "gradprune/netcore/network.hpp"
#include "gradprune/prune/mask.hpp"

namespace gradprune {

/// SGD with momentum, L2 weight decay and a step learning-rate schedule.
struct OptimizerState {
  std::vector<double> momentum_buffers;     // aligned with params
  double lr = 0.1;
  double momentum = 0.0;                    // in [0, 1)
  double weight_decay = 0.0;                // >= 0
  std::vector<std::size_t> lr_decay_epochs; // sorted, deduplicated
  double lr_decay_factor = 1.0;
  std::size_t decay_cursor = 0;             // next decay epoch to apply

  OptimizerState() = default;
  OptimizerState(std::size_t param_count, double lr, double momentum,
                 double weight_decay, std::vector<std::size_t> decay_epochs,
                 double decay_factor);
};

/// One update from net.grads():
///   active i:  buf <- momentum*buf + (grad + weight_decay*theta);
///              theta <- theta - lr*buf
///   pruned i:  theta <- 0, buf <- 0 (never resurrected)
void sgd_step(Network& net, const SparsityMask& mask, OptimizerState& opt);

/// Multiplies lr by lr_decay_factor once for each listed epoch that has
/// completed. Idempotent per epoch; completed_epoch must be non-decreasing
/// across calls.
void apply_lr_schedule(OptimizerState& opt, std::size_t completed_epoch);

}  // namespace gradprune

#endif  // GRADPRUNE_NETCORE_OPTIM_HPP
