// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/erk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/rng.hpp"
#include "gradprune/prune/schedule.hpp"

namespace gradprune {

double erk_raw_ratio(const LayerSpec& layer) {
  switch (layer.kind) {
    case LayerKind::Conv2D: {
      const double c_in = static_cast<double>(layer.in_channels);
      const double c_out = static_cast<double>(layer.out_channels);
      const double kh = static_cast<double>(layer.kernel_h);
      const double kw = static_cast<double>(layer.kernel_w);
      return (c_in + c_out + kh + kw) / (c_in * c_out * kh * kw);
    }
    case LayerKind::FullyConnected: {
      const double n_in = static_cast<double>(layer.in_features);
      const double n_out = static_cast<double>(layer.out_features);
      return (n_in + n_out) / (n_in * n_out);
    }
    default:
      throw ConfigError("erk ratio: layer is not trainable");
  }
}

std::vector<double> erk_allocate(const std::vector<LayerSpec>& layers, double s_ini) {
  if (!(s_ini > 0.0) || !(s_ini < 1.0)) {
    throw ConfigError("erk_allocate: s_ini must be in (0, 1)");
  }
  const std::size_t n_layers = layers.size();
  std::vector<double> raw(n_layers, 0.0);
  std::vector<double> param_count(n_layers, 0.0);
  double n_dense = 0.0;
  for (std::size_t i = 0; i < n_layers; ++i) {
    if (!layers[i].trainable()) continue;
    raw[i] = erk_raw_ratio(layers[i]);
    param_count[i] = static_cast<double>(layers[i].param_count());
    n_dense += param_count[i];
  }
  if (n_dense == 0.0) throw ConfigError("erk_allocate: network has no parameters");

  const double target = static_cast<double>(round_half_up((1.0 - s_ini) * n_dense));
  if (target > n_dense) throw ConfigError("erk_allocate: target exceeds dense size");

  // Solve for the global scale; cap any density at 1 and redistribute the
  // surplus over the uncapped layers until no new cap appears.
  std::vector<bool> capped(n_layers, false);
  for (;;) {
    double capped_params = 0.0;
    double free_mass = 0.0;
    for (std::size_t i = 0; i < n_layers; ++i) {
      if (!layers[i].trainable()) continue;
      if (capped[i]) {
        capped_params += param_count[i];
      } else {
        free_mass += raw[i] * param_count[i];
      }
    }
    const double remaining = target - capped_params;
    if (free_mass == 0.0) {
      if (remaining > 0.5) {
        throw ConfigError("erk_allocate: infeasible target (all layers dense)");
      }
      break;
    }
    const double scale = remaining / free_mass;
    bool newly_capped = false;
    for (std::size_t i = 0; i < n_layers; ++i) {
      if (!layers[i].trainable() || capped[i]) continue;
      if (scale * raw[i] > 1.0) {
        capped[i] = true;
        newly_capped = true;
      }
    }
    if (!newly_capped) {
      if (remaining < 0.0) {
        throw ConfigError("erk_allocate: negative remaining budget");
      }
      std::vector<double> densities(n_layers, 1.0);
      for (std::size_t i = 0; i < n_layers; ++i) {
        if (!layers[i].trainable()) continue;
        densities[i] = capped[i] ? 1.0 : scale * raw[i];
        if (densities[i] <= 0.0) {
          throw ConfigError("erk_allocate: degenerate density at layer " +
                            std::to_string(i));
        }
      }
      return densities;
    }
  }
  // All layers capped and the target is met by fully dense layers.
  std::vector<double> densities(n_layers, 1.0);
  return densities;
}

SparsityMask sparse_init_mask(const Network& net, const std::vector<double>& densities,
                              std::uint64_t seed) {
  const auto& layers = net.layers();
  if (densities.size() != layers.size()) {
    throw ConfigError("sparse_init_mask: densities not aligned with layers");
  }

  double exact_total = 0.0;
  std::vector<std::size_t> keep(layers.size(), 0);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].trainable()) continue;
    const double d = densities[i];
    if (!(d > 0.0) || d > 1.0) {
      throw ConfigError("sparse_init_mask: density out of (0, 1] at layer " +
                        std::to_string(i));
    }
    const double n = static_cast<double>(layers[i].param_count());
    exact_total += d * n;
    keep[i] = round_half_up(d * n);
  }
  const std::size_t target = round_half_up(exact_total);

  // Push the rounding residue onto the largest layers first.
  std::size_t total = std::accumulate(keep.begin(), keep.end(), std::size_t{0});
  std::vector<std::size_t> by_size;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].trainable()) by_size.push_back(i);
  }
  std::sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    if (layers[a].param_count() != layers[b].param_count()) {
      return layers[a].param_count() > layers[b].param_count();
    }
    return a < b;
  });
  for (std::size_t i : by_size) {
    if (total == target) break;
    const std::size_t cap = layers[i].param_count();
    if (total < target) {
      const std::size_t add = std::min(target - total, cap - keep[i]);
      keep[i] += add;
      total += add;
    } else {
      const std::size_t drop = std::min(total - target, keep[i]);
      keep[i] -= drop;
      total -= drop;
    }
  }
  if (total != target) {
    throw ConfigError("sparse_init_mask: cannot correct rounding residue");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> kept;
  kept.reserve(target);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].trainable()) continue;
    const auto range = net.layer_range(i);
    std::vector<std::size_t> order(range.count);
    for (std::size_t k = 0; k < range.count; ++k) order[k] = range.offset + k;
    shuffle(order, rng);
    for (std::size_t k = 0; k < keep[i]; ++k) kept.push_back(order[k]);
  }
  return SparsityMask::from_kept_indices(net.param_count(), kept);
}

}  // namespace gradprune
