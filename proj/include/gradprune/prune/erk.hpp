// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_ERK_HPP
#define GRADPRUNE_PRUNE_ERK_HPP

#include <cstdint>
#include <vector>

#include "gradprune/netcore/layers.hpp"
#include "gradprune/netcore/network.hpp"
#include "gradprune/prune/mask.hpp"

namespace gradprune {

/// Raw Erdos-Renyi(-Kernel) density ratio of a trainable layer:
///   Conv2D:         (c_in + c_out + kh + kw) / (c_in * c_out * kh * kw)
///   FullyConnected: (n_in + n_out) / (n_in * n_out)
/// Layers with fewer parameters relative to their fan get a larger ratio.
double erk_raw_ratio(const LayerSpec& layer);

/// Per-layer keep densities proportional to the raw ERK ratios, scaled by a
/// single global multiplier so that
///   sum_l density_l * params_l == round_half_up((1 - s_ini) * N*).
/// Densities that would exceed 1 are capped and the surplus redistributed
/// over the uncapped layers until a fixpoint. The returned vector is aligned
/// with `layers`; non-trainable entries are 1.
/// Throws ConfigError if even all-dense layers cannot reach the target.
std::vector<double> erk_allocate(const std::vector<LayerSpec>& layers, double s_ini);

/// Random sparse mask matching the ERK densities: per layer, exactly
/// round_half_up(density_l * params_l) indices kept, drawn uniformly under
/// `seed`. Per-layer rounding residue is corrected on the largest layers so
/// the global total equals round_half_up(sum_l density_l * params_l) exactly.
SparsityMask sparse_init_mask(const Network& net, const std::vector<double>& densities,
                              std::uint64_t seed);

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_ERK_HPP
