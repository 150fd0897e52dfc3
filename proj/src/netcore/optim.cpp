// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/netcore/optim.hpp"

#include <algorithm>

#include "gradprune/errors.hpp"

namespace gradprune {

OptimizerState::OptimizerState(std::size_t param_count, double lr_, double momentum_,
                               double weight_decay_,
                               std::vector<std::size_t> decay_epochs,
                               double decay_factor)
    : momentum_buffers(param_count, 0.0),
      lr(lr_),
      momentum(momentum_),
      weight_decay(weight_decay_),
      lr_decay_epochs(std::move(decay_epochs)),
      lr_decay_factor(decay_factor) {
  if (!(lr > 0.0)) throw ConfigError("optimizer: lr must be positive");
  if (momentum < 0.0 || momentum >= 1.0) {
    throw ConfigError("optimizer: momentum must be in [0, 1)");
  }
  if (weight_decay < 0.0) throw ConfigError("optimizer: weight_decay must be >= 0");
  if (!(lr_decay_factor > 0.0)) {
    throw ConfigError("optimizer: lr_decay_factor must be positive");
  }
  std::sort(lr_decay_epochs.begin(), lr_decay_epochs.end());
  lr_decay_epochs.erase(std::unique(lr_decay_epochs.begin(), lr_decay_epochs.end()),
                        lr_decay_epochs.end());
}

void sgd_step(Network& net, const SparsityMask& mask, OptimizerState& opt) {
  auto& p = net.params();
  const auto& g = net.grads();
  auto& buf = opt.momentum_buffers;
  if (buf.size() != p.size() || mask.size() != p.size()) {
    throw ConfigError("sgd_step: optimizer/mask not aligned with parameters");
  }
  const double lr = opt.lr, mu = opt.momentum, wd = opt.weight_decay;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (mask.active(i)) {
      buf[i] = mu * buf[i] + (g[i] + wd * p[i]);
      p[i] -= lr * buf[i];
    } else {
      p[i] = 0.0;
      buf[i] = 0.0;
    }
  }
}

void apply_lr_schedule(OptimizerState& opt, std::size_t completed_epoch) {
  while (opt.decay_cursor < opt.lr_decay_epochs.size() &&
         opt.lr_decay_epochs[opt.decay_cursor] <= completed_epoch) {
    opt.lr *= opt.lr_decay_factor;
    ++opt.decay_cursor;
  }
}

}  // namespace gradprune
