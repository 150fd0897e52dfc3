// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_REPORT_HPP
#define GRADPRUNE_HARNESS_REPORT_HPP

#include <string>
#include <vector>

#include "gradprune/netcore/network.hpp"
#include "gradprune/prune/mask.hpp"

namespace gradprune {

struct LayerSparsityRow {
  std::string name;        // canonical layer description, e.g. fc(784->256,b)
  std::size_t dense = 0;   // parameter count of the layer
  std::size_t active = 0;  // kept parameters under the mask
  double sparsity = 0.0;   // 1 - active/dense
};

/// Per-trainable-layer sparsity breakdown plus a totals row. The active
/// counts sum to the mask popcount by construction.
struct LayerSparsityReport {
  std::vector<LayerSparsityRow> rows;
  LayerSparsityRow total;

  /// Tab-delimited table with a header and trailing totals row.
  std::string text() const;
};

LayerSparsityReport report_layer_sparsity(const Network& net,
                                          const SparsityMask& mask);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_REPORT_HPP
