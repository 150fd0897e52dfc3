// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>

#include "gradprune/netcore/network.hpp"
#include "gradprune/netcore/optim.hpp"
#include "gradprune/netcore/rng.hpp"
#include "gradprune/prune/event.hpp"
#include "gradprune/prune/policy.hpp"
#include "gradprune/prune/schedule.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

using namespace gradprune;
using namespace gradprune::testing;

namespace {

struct Fixture {
  Network net;
  SparsityMask mask;
  OptimizerState opt;
  PruneSchedule sched;
  SelectionPolicy policy;

  Fixture()
      : net({LayerSpec::fully_connected(6, 8), LayerSpec::relu(),
             LayerSpec::fully_connected(8, 3)},
            {6}),
        mask(SparsityMask::ones(net.param_count())),
        opt(net.param_count(), 0.1, 0.9, 0.0, {}, 1.0),
        sched{/*s_ini=*/0.0, /*s_fin=*/0.9, /*t_ini=*/0, /*t_fin=*/100,
              /*delta_t=*/10},
        policy{Ordering::GradientFirst, RateMode::Fixed, 0.5} {
    std::mt19937_64 rng(11);
    init_params(net, 1);
    Batch b = random_batch(net, 4, rng);
    loss_and_backward(net, mask, b);
    for (auto& v : opt.momentum_buffers) v = 0.5;
  }
};

}  // namespace

TEST_CASE("an event prunes down to the scheduled count and zeroes state") {
  Fixture f;
  const std::size_t n_dense = f.net.param_count();
  auto before_bits = f.mask.bits();
  PruneEventRecord rec = prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 10);

  std::size_t want = target_count(f.sched, 10, n_dense);
  CHECK(rec.t == 10);
  CHECK(rec.n_before == n_dense);
  CHECK(rec.n_target == want);
  CHECK(rec.n_pruned == n_dense - want);
  CHECK(f.mask.active_count() == want);

  std::size_t flipped = 0, layer_sum = 0;
  for (std::size_t i = 0; i < n_dense; ++i) {
    if (before_bits[i] && !f.mask.bits()[i]) {
      ++flipped;
      CHECK(f.net.params()[i] == 0.0);
      CHECK(f.opt.momentum_buffers[i] == 0.0);
    }
  }
  CHECK(flipped == rec.n_pruned);
  for (const auto& [layer, count] : rec.per_layer_pruned) {
    CHECK(f.net.layers()[layer].trainable());
    layer_sum += count;
  }
  CHECK(layer_sum == rec.n_pruned);
}

TEST_CASE("the pruned set equals the two-step oracle on the live gradients") {
  Fixture f;
  std::vector<std::size_t> indices(f.net.param_count());
  std::vector<double> theta_abs(indices.size()), grad_abs(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    indices[i] = i;
    theta_abs[i] = std::abs(f.net.params()[i]);
    grad_abs[i] = std::abs(f.net.grads()[i]);
  }
  std::size_t n_before = f.mask.active_count();
  std::size_t n_target = target_count(f.sched, 20, n_before);
  std::size_t n_prune = n_before - n_target;
  std::size_t pool =
      pool_size(f.policy, n_before, n_prune, 20, f.sched.t_ini, f.sched.t_fin);
  auto want =
      selection_oracle(indices, theta_abs, grad_abs, n_prune, pool, f.policy.order);

  PruneEventRecord rec = prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 20);
  CHECK(rec.pool_size == pool);
  for (std::size_t i : want) CHECK_FALSE(f.mask.active(i));
  CHECK(f.mask.active_count() == n_before - want.size());
}

TEST_CASE("an already-met schedule point is a recorded no-op") {
  Fixture f;
  prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 50);
  std::size_t active = f.mask.active_count();
  // Replaying an earlier instant asks for a larger target than is active.
  PruneEventRecord rec = prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 10);
  CHECK(rec.n_pruned == 0);
  CHECK(rec.n_target == active);
  CHECK(rec.per_layer_pruned.empty());
  CHECK(f.mask.active_count() == active);
}

TEST_CASE("instants outside the window or off the grid are rejected") {
  Fixture f;
  CHECK_THROWS_AS(prune_event(f.net, f.mask, f.sched, f.policy, f.opt, -10),
                  std::invalid_argument);
  CHECK_THROWS_AS(prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 110),
                  std::invalid_argument);
  CHECK_THROWS_AS(prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 15),
                  std::invalid_argument);
  SparsityMask small = SparsityMask::ones(3);
  CHECK_THROWS_AS(prune_event(f.net, small, f.sched, f.policy, f.opt, 10),
                  std::invalid_argument);
}

TEST_CASE("the record serializes to one json object per line") {
  Fixture f;
  PruneEventRecord rec = prune_event(f.net, f.mask, f.sched, f.policy, f.opt, 10);
  std::string line = rec.to_json_line();
  CHECK(line.find('\n') == std::string::npos);
  auto j = nlohmann::json::parse(line);
  CHECK(j["type"] == "prune_event");
  CHECK(j["t"] == 10);
  CHECK(j["n_before"] == rec.n_before);
  CHECK(j["n_target"] == rec.n_target);
  CHECK(j["n_pruned"] == rec.n_pruned);
  CHECK(j["pool_size"] == rec.pool_size);
  std::size_t sum = 0;
  for (const auto& entry : j["per_layer_pruned"]) {
    sum += entry[1].get<std::size_t>();
  }
  CHECK(sum == rec.n_pruned);
}

TEST_CASE("walking the full grid lands exactly on the final count") {
  Fixture f;
  for (std::int64_t t = f.sched.delta_t; t <= f.sched.t_fin; t += f.sched.delta_t) {
    prune_event(f.net, f.mask, f.sched, f.policy, f.opt, t);
    CHECK(f.mask.active_count() ==
          target_count(f.sched, t, f.net.param_count()));
  }
  CHECK(f.mask.active_count() ==
        round_half_up(0.1 * double(f.net.param_count())));
}
