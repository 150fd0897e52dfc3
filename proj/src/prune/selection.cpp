// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/selection.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gradprune {

namespace {

// Positions of the k smallest keys, ties broken by ascending global index.
// Sorting (key, gindex) pairs gives a total order, so std::sort is stable in
// effect. Only the first k positions are fully ordered via partial_sort.
std::vector<std::size_t> k_smallest(std::span<const std::size_t> indices,
                                    std::span<const double> key,
                                    std::span<const std::size_t> positions,
                                    std::size_t k) {
  std::vector<std::size_t> pos(positions.begin(), positions.end());
  auto less = [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return indices[a] < indices[b];
  };
  std::partial_sort(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k),
                    pos.end(), less);
  pos.resize(k);
  return pos;
}

}  // namespace

std::vector<std::size_t> select_prune_set(std::span<const std::size_t> indices,
                                          std::span<const double> theta_abs,
                                          std::span<const double> grad_abs,
                                          std::size_t n_prune, std::size_t pool,
                                          Ordering order) {
  const std::size_t n_active = indices.size();
  if (theta_abs.size() != n_active || grad_abs.size() != n_active) {
    throw std::invalid_argument("select_prune_set: arrays not aligned");
  }
  if (n_prune > n_active) {
    throw std::invalid_argument("select_prune_set: n_prune " +
                                std::to_string(n_prune) + " > n_active " +
                                std::to_string(n_active));
  }
  if (pool < n_prune || pool > n_active) {
    throw std::invalid_argument("select_prune_set: pool must lie in [n_prune, n_active]");
  }

  std::span<const double> stage1 = order == Ordering::GradientFirst ? grad_abs : theta_abs;
  std::span<const double> stage2 = order == Ordering::GradientFirst ? theta_abs : grad_abs;

  std::vector<std::size_t> all(n_active);
  for (std::size_t i = 0; i < n_active; ++i) all[i] = i;

  std::vector<std::size_t> culled = k_smallest(indices, stage1, all, pool);
  std::vector<std::size_t> chosen = k_smallest(indices, stage2, culled, n_prune);

  std::vector<std::size_t> out(n_prune);
  for (std::size_t i = 0; i < n_prune; ++i) out[i] = indices[chosen[i]];
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gradprune
