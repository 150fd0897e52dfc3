// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/report.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gradprune {

LayerSparsityReport report_layer_sparsity(const Network& net,
                                          const SparsityMask& mask) {
  if (mask.size() != net.param_count()) {
    throw std::invalid_argument("report_layer_sparsity: mask/network mismatch");
  }
  LayerSparsityReport rep;
  for (std::size_t li = 0; li < net.layers().size(); ++li) {
    const LayerSpec& layer = net.layers()[li];
    if (!layer.trainable()) continue;
    auto range = net.layer_range(li);
    LayerSparsityRow row;
    row.name = layer.describe();
    row.dense = range.count;
    for (std::size_t i = range.offset; i < range.offset + range.count; ++i) {
      if (mask.active(i)) ++row.active;
    }
    row.sparsity = range.count == 0
                       ? 0.0
                       : 1.0 - double(row.active) / double(range.count);
    rep.rows.push_back(row);
    rep.total.dense += row.dense;
    rep.total.active += row.active;
  }
  rep.total.name = "total";
  rep.total.sparsity = rep.total.dense == 0
                           ? 0.0
                           : 1.0 - double(rep.total.active) / double(rep.total.dense);
  return rep;
}

std::string LayerSparsityReport::text() const {
  std::ostringstream out;
  out << "layer\tdense\tactive\tsparsity\n";
  auto emit = [&out](const LayerSparsityRow& row) {
    out << row.name << "\t" << row.dense << "\t" << row.active << "\t"
        << std::fixed << std::setprecision(6) << row.sparsity << "\n";
  };
  for (const auto& row : rows) emit(row);
  emit(total);
  return out.str();
}

}  // namespace gradprune
