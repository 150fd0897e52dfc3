// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_SELECTION_HPP
#define GRADPRUNE_PRUNE_SELECTION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "gradprune/prune/policy.hpp"

namespace gradprune {

/// Two-step top-K selection over the active parameters.
///
/// GradientFirst: stage 1 keeps the `pool` entries with smallest |g|;
/// stage 2 picks the `n_prune` of those with smallest |theta|.
/// MagnitudeFirst swaps the two keys. Ties at either stage break by
/// ascending global index, so the result is deterministic.
///
/// `indices`, `theta_abs` and `grad_abs` are parallel arrays describing the
/// active parameters; the return value is the selected global indices in
/// ascending order, exactly n_prune of them.
std::vector<std::size_t> select_prune_set(std::span<const std::size_t> indices,
                                          std::span<const double> theta_abs,
                                          std::span<const double> grad_abs,
                                          std::size_t n_prune, std::size_t pool,
                                          Ordering order);

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_SELECTION_HPP
