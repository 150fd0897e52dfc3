// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_EVENT_HPP
#define GRADPRUNE_PRUNE_EVENT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gradprune/netcore/network.hpp"
#include "gradprune/netcore/optim.hpp"
#include "gradprune/prune/mask.hpp"
#include "gradprune/prune/policy.hpp"
#include "gradprune/prune/schedule.hpp"

namespace gradprune {

/// Audit record of one prune event. n_before - n_pruned == n_target.
struct PruneEventRecord {
  std::int64_t t = 0;
  std::size_t n_before = 0;
  std::size_t n_target = 0;
  std::size_t n_pruned = 0;
  std::size_t pool_size = 0;
  std::vector<std::pair<std::size_t, std::size_t>> per_layer_pruned;  // (layer, count)

  /// One line of structured text (JSON object) for the audit stream.
  std::string to_json_line() const;
};

/// Executes the prune event at iteration t. Requires net.grads() freshly
/// populated from loss_and_backward on the current minibatch (gradient
/// staleness cannot be detected here; callers own that contract).
///
/// Selection runs over the single global pool of all active parameters
/// across all layers. Pruned indices get their mask bit cleared and their
/// parameter value and momentum buffer zeroed. Afterwards
/// mask.active_count() == target_count(sched, t, N*).
PruneEventRecord prune_event(Network& net, SparsityMask& mask,
                             const PruneSchedule& sched,
                             const SelectionPolicy& policy, OptimizerState& opt,
                             std::int64_t t);

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_EVENT_HPP
