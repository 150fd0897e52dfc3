// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/event.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gradprune/prune/selection.hpp"

#include <json.hpp>

namespace gradprune {

std::string PruneEventRecord::to_json_line() const {
  nlohmann::json j;
  j["type"] = "prune_event";
  j["t"] = t;
  j["n_before"] = n_before;
  j["n_target"] = n_target;
  j["n_pruned"] = n_pruned;
  j["pool_size"] = pool_size;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& [layer, count] : per_layer_pruned) {
    layers.push_back({layer, count});
  }
  j["per_layer_pruned"] = layers;
  return j.dump();
}

PruneEventRecord prune_event(Network& net, SparsityMask& mask,
                             const PruneSchedule& sched,
                             const SelectionPolicy& policy, OptimizerState& opt,
                             std::int64_t t) {
  if (t < sched.t_ini || t > sched.t_fin) {
    throw std::invalid_argument("prune_event: t outside [t_ini, t_fin]");
  }
  if ((t - sched.t_ini) % sched.delta_t != 0) {
    throw std::invalid_argument("prune_event: t is not an event instant");
  }
  if (mask.size() != net.param_count()) {
    throw std::invalid_argument("prune_event: mask not aligned with parameters");
  }

  PruneEventRecord rec;
  rec.t = t;
  rec.n_before = mask.active_count();
  rec.n_target = target_count(sched, t, net.param_count());
  if (rec.n_target >= rec.n_before) {
    rec.n_target = rec.n_before;  // schedule already met; no-op event
    return rec;
  }
  rec.n_pruned = rec.n_before - rec.n_target;

  // Single global pool across all layers (first conv and last fc included).
  std::vector<std::size_t> indices;
  std::vector<double> theta_abs, grad_abs;
  indices.reserve(rec.n_before);
  theta_abs.reserve(rec.n_before);
  grad_abs.reserve(rec.n_before);
  const auto& params = net.params();
  const auto& grads = net.grads();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!mask.active(i)) continue;
    indices.push_back(i);
    theta_abs.push_back(std::abs(params[i]));
    grad_abs.push_back(std::abs(grads[i]));
  }

  rec.pool_size =
      pool_size(policy, rec.n_before, rec.n_pruned, t, sched.t_ini, sched.t_fin);
  const std::vector<std::size_t> pruned = select_prune_set(
      indices, theta_abs, grad_abs, rec.n_pruned, rec.pool_size, policy.order);

  std::map<std::size_t, std::size_t> per_layer;
  auto& p = net.params();
  auto& buf = opt.momentum_buffers;
  for (std::size_t i : pruned) {
    mask.clear(i);
    p[i] = 0.0;
    buf[i] = 0.0;
    ++per_layer[net.layer_of_param(i)];
  }
  rec.per_layer_pruned.assign(per_layer.begin(), per_layer.end());
  return rec;
}

}  // namespace gradprune
