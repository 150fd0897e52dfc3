// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/layers.hpp"

using namespace gradprune;

TEST_CASE("fully connected counts and fan-in") {
  auto fc = LayerSpec::fully_connected(784, 256);
  CHECK(fc.trainable());
  CHECK(fc.weight_count() == 784 * 256);
  CHECK(fc.bias_count() == 256);
  CHECK(fc.param_count() == 784 * 256 + 256);
  CHECK(fc.fan_in() == 784);

  auto nb = LayerSpec::fully_connected(10, 5, false);
  CHECK(nb.bias_count() == 0);
  CHECK(nb.param_count() == 50);
}

TEST_CASE("conv counts and fan-in") {
  auto conv = LayerSpec::conv2d(3, 16, 3, 3, 1, 1);
  CHECK(conv.weight_count() == 3 * 16 * 3 * 3);
  CHECK(conv.bias_count() == 16);
  CHECK(conv.fan_in() == 3 * 3 * 3);
}

TEST_CASE("relu and flatten carry no parameters") {
  CHECK(LayerSpec::relu().param_count() == 0);
  CHECK(LayerSpec::flatten().param_count() == 0);
  CHECK_FALSE(LayerSpec::relu().trainable());
  CHECK_FALSE(LayerSpec::flatten().trainable());
}

TEST_CASE("output shapes follow the conv arithmetic") {
  auto conv = LayerSpec::conv2d(1, 4, 3, 3, 1, 1);
  CHECK(conv.output_shape({1, 28, 28}, 0) == std::vector<std::size_t>{4, 28, 28});

  auto stride2 = LayerSpec::conv2d(3, 8, 3, 3, 2, 1);
  CHECK(stride2.output_shape({3, 32, 32}, 0) == std::vector<std::size_t>{8, 16, 16});

  auto valid = LayerSpec::conv2d(2, 5, 2, 2);
  CHECK(valid.output_shape({2, 6, 6}, 0) == std::vector<std::size_t>{5, 5, 5});

  CHECK(LayerSpec::flatten().output_shape({4, 7, 7}, 0) ==
        std::vector<std::size_t>{196});
  CHECK(LayerSpec::relu().output_shape({4, 7, 7}, 0) ==
        std::vector<std::size_t>{4, 7, 7});
  CHECK(LayerSpec::fully_connected(196, 10).output_shape({196}, 0) ==
        std::vector<std::size_t>{10});
}

TEST_CASE("shape mismatches name the offending layer") {
  auto fc = LayerSpec::fully_connected(10, 5);
  CHECK_THROWS_AS(fc.output_shape({11}, 3), ConfigError);
  CHECK_THROWS_WITH_AS(fc.output_shape({11}, 3),
                       doctest::Contains("layer 3"), ConfigError);
  auto conv = LayerSpec::conv2d(3, 4, 3, 3);
  CHECK_THROWS_AS(conv.output_shape({1, 8, 8}, 0), ConfigError);
  CHECK_THROWS_AS(conv.output_shape({3, 2, 2}, 0), ConfigError);  // kernel too big
}

TEST_CASE("describe gives the canonical short forms") {
  CHECK(LayerSpec::fully_connected(784, 256).describe() == "fc(784->256,b)");
  CHECK(LayerSpec::fully_connected(784, 256, false).describe() == "fc(784->256)");
  CHECK(LayerSpec::conv2d(1, 16, 3, 3, 1, 1).describe() == "conv(1->16,3x3,s1,p1,b)");
  CHECK(LayerSpec::relu().describe() == "relu");
  CHECK(LayerSpec::flatten().describe() == "flatten");
}

TEST_CASE("layer list round-trips through its text form") {
  std::vector<LayerSpec> layers = {
      LayerSpec::conv2d(1, 8, 3, 3, 2, 1),
      LayerSpec::relu(),
      LayerSpec::flatten(),
      LayerSpec::fully_connected(392, 10, false),
  };
  std::string text = format_layer_list(layers);
  auto parsed = parse_layer_list(text);
  REQUIRE(parsed.size() == layers.size());
  CHECK(format_layer_list(parsed) == text);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    CHECK(parsed[i].describe() == layers[i].describe());
  }
}

TEST_CASE("malformed layer text is rejected") {
  CHECK_THROWS_AS(parse_layer_list("fc(10->)"), ConfigError);
  CHECK_THROWS_AS(parse_layer_list("dense(10->5)"), ConfigError);
  CHECK_THROWS_AS(parse_layer_list(""), ConfigError);
}
