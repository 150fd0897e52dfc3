// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/network.hpp"
#include "gradprune/prune/erk.hpp"
#include "gradprune/prune/schedule.hpp"
#include "support/oracles.hpp"

using namespace gradprune;
using namespace gradprune::testing;

TEST_CASE("raw ratios follow the closed forms") {
  CHECK(erk_raw_ratio(LayerSpec::fully_connected(10, 10, false)) ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(erk_raw_ratio(LayerSpec::fully_connected(784, 256)) ==
        doctest::Approx((784.0 + 256.0) / (784.0 * 256.0)).epsilon(1e-15));
  CHECK(erk_raw_ratio(LayerSpec::conv2d(3, 16, 3, 3)) ==
        doctest::Approx((3.0 + 16.0 + 3.0 + 3.0) / (3.0 * 16.0 * 3.0 * 3.0))
            .epsilon(1e-15));
  CHECK_THROWS_AS(erk_raw_ratio(LayerSpec::relu()), ConfigError);
  CHECK_THROWS_AS(erk_raw_ratio(LayerSpec::flatten()), ConfigError);
}

TEST_CASE("two uncapped fc layers match the hand-solved allocation") {
  // raw ratios 0.2 and 0.101; kept budget 5050 of 10100 at half sparsity;
  // the shared scale is 5050 / (0.2 * 100 + 0.101 * 10000) = 5050 / 1030.
  std::vector<LayerSpec> layers = {
      LayerSpec::fully_connected(10, 10, false),
      LayerSpec::relu(),
      LayerSpec::fully_connected(10, 1000, false),
  };
  auto d = erk_allocate(layers, 0.5);
  REQUIRE(d.size() == 3);
  const double scale = 5050.0 / 1030.0;
  CHECK(d[0] == doctest::Approx(0.2 * scale).epsilon(1e-12));
  CHECK(d[1] == 1.0);
  CHECK(d[2] == doctest::Approx(0.101 * scale).epsilon(1e-12));
  CHECK(d[0] * 100.0 + d[2] * 10000.0 == doctest::Approx(5050.0).epsilon(1e-12));
}

TEST_CASE("a tiny layer caps at density one and the rest absorbs the budget") {
  // raw ratios 1.0 (4 params) and 0.02 (10000 params); the uncapped solve
  // would push the small layer past density 1, so it pins there and the
  // remaining 4998 kept parameters land on the big layer.
  std::vector<LayerSpec> layers = {
      LayerSpec::fully_connected(2, 2, false),
      LayerSpec::fully_connected(100, 100, false),
  };
  // Not a runnable stack, but erk_allocate only reads the layer shapes.
  auto d = erk_allocate(layers, 0.5);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == doctest::Approx(4998.0 / 10000.0).epsilon(1e-12));
  CHECK(d[0] * 4.0 + d[1] * 10000.0 == doctest::Approx(5002.0).epsilon(1e-12));
}

TEST_CASE("allocation rejects out-of-range sparsity and empty stacks") {
  std::vector<LayerSpec> layers = {LayerSpec::fully_connected(4, 4)};
  CHECK_THROWS_AS(erk_allocate(layers, 0.0), ConfigError);
  CHECK_THROWS_AS(erk_allocate(layers, 1.0), ConfigError);
  CHECK_THROWS_AS(erk_allocate(layers, -0.5), ConfigError);
  std::vector<LayerSpec> no_params = {LayerSpec::relu(), LayerSpec::flatten()};
  CHECK_THROWS_AS(erk_allocate(no_params, 0.5), ConfigError);
}

TEST_CASE("allocation agrees with the bisection oracle on random stacks") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    RandomArch arch = random_architecture(rng, true);
    double s_ini = 0.05 + 0.9 * uniform_unit(rng);
    auto got = erk_allocate(arch.layers, s_ini);
    auto want = erk_bisection_oracle(arch.layers, s_ini);
    REQUIRE(got.size() == want.size());
    std::size_t n_dense = 0;
    for (const auto& l : arch.layers) n_dense += l.param_count();
    double kept = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (!arch.layers[i].trainable()) continue;
      CHECK(got[i] > 0.0);
      CHECK(got[i] <= 1.0);
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-7));
      kept += got[i] * double(arch.layers[i].param_count());
    }
    double target = double(round_half_up((1.0 - s_ini) * double(n_dense)));
    CHECK(kept == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("sparse masks hit the per-layer counts and the exact global total") {
  Network net({LayerSpec::fully_connected(784, 256), LayerSpec::relu(),
               LayerSpec::fully_connected(256, 10)},
              {784});
  auto d = erk_allocate(net.layers(), 0.9);
  SparsityMask mask = sparse_init_mask(net, d, 42);

  double exact_total = 0.0;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    if (!net.layers()[i].trainable()) continue;
    exact_total += d[i] * double(net.layers()[i].param_count());
  }
  CHECK(mask.active_count() == round_half_up(exact_total));
  CHECK(mask.active_count() ==
        round_half_up(0.1 * double(net.param_count())));

  // Per-layer bit counts sit within one parameter of the rounded share
  // (the residue correction may nudge the largest layer).
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    if (!net.layers()[i].trainable()) continue;
    auto range = net.layer_range(i);
    std::size_t bits = 0;
    for (std::size_t k = 0; k < range.count; ++k) {
      bits += mask.bits()[range.offset + k];
    }
    auto share = round_half_up(d[i] * double(range.count));
    CHECK(bits >= (share == 0 ? 0 : share - 1));
    CHECK(bits <= share + 1);
  }
}

TEST_CASE("half-up per-layer rounding residue lands on the largest layer") {
  // Two 10-parameter layers at density 0.25 each round to 3 kept, but the
  // exact global total is 5; the correction drops one from the first of the
  // equally sized layers.
  Network net({LayerSpec::fully_connected(10, 1, false), LayerSpec::relu(),
               LayerSpec::fully_connected(1, 10, false)},
              {10});
  std::vector<double> d = {0.25, 1.0, 0.25};
  SparsityMask mask = sparse_init_mask(net, d, 7);
  CHECK(mask.active_count() == 5);
  auto count_layer = [&](std::size_t layer) {
    auto range = net.layer_range(layer);
    std::size_t bits = 0;
    for (std::size_t k = 0; k < range.count; ++k) {
      bits += mask.bits()[range.offset + k];
    }
    return bits;
  };
  CHECK(count_layer(0) == 2);
  CHECK(count_layer(2) == 3);
}

TEST_CASE("mask draw is deterministic in the seed") {
  Network net({LayerSpec::fully_connected(32, 16), LayerSpec::relu(),
               LayerSpec::fully_connected(16, 4)},
              {32});
  auto d = erk_allocate(net.layers(), 0.6);
  SparsityMask a = sparse_init_mask(net, d, 99);
  SparsityMask b = sparse_init_mask(net, d, 99);
  SparsityMask c = sparse_init_mask(net, d, 100);
  CHECK(a.bits() == b.bits());
  CHECK(a.bits() != c.bits());
  CHECK(a.active_count() == c.active_count());
}

TEST_CASE("mask construction rejects bad densities") {
  Network net({LayerSpec::fully_connected(8, 4)}, {8});
  CHECK_THROWS_AS(sparse_init_mask(net, {0.5, 0.5}, 1), ConfigError);
  CHECK_THROWS_AS(sparse_init_mask(net, {0.0}, 1), ConfigError);
  CHECK_THROWS_AS(sparse_init_mask(net, {1.5}, 1), ConfigError);
}
