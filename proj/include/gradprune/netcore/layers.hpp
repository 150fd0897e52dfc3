// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_NETCORE_LAYERS_HPP
#define GRADPRUNE_NETCORE_LAYERS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace gradprune {

enum class LayerKind { FullyConnected, Conv2D, ReLU, Flatten };

/// One layer of the network. Trainable kinds (FullyConnected, Conv2D) own a
/// contiguous slice of the flat parameter array: weights first, bias after.
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;

  // FullyConnected
  std::size_t in_features = 0;
  std::size_t out_features = 0;

  // Conv2D
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;

  bool has_bias = false;

  static LayerSpec fully_connected(std::size_t in, std::size_t out, bool bias = true);
  static LayerSpec conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kh,
                          std::size_t kw, std::size_t stride = 1,
                          std::size_t padding = 0, bool bias = true);
  static LayerSpec relu();
  static LayerSpec flatten();

  bool trainable() const {
    return kind == LayerKind::FullyConnected || kind == LayerKind::Conv2D;
  }

  std::size_t weight_count() const;
  std::size_t bias_count() const;
  std::size_t param_count() const { return weight_count() + bias_count(); }

  /// Incoming connections per output unit; the He init bound uses this.
  std::size_t fan_in() const;

  /// Output sample shape (no batch dim) for a given input sample shape.
  /// Throws ConfigError on a shape mismatch; `layer_index` tags the message.
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in,
                                        std::size_t layer_index) const;

  /// Short human/machine-readable form, e.g. "fc(784->256,b)".
  std::string describe() const;
};

/// Canonical one-line serialization of a layer list; parseable by
/// parse_layer_list (used by checkpoints).
std::string format_layer_list(const std::vector<LayerSpec>& layers);
std::vector<LayerSpec> parse_layer_list(const std::string& text);

}  // namespace gradprune

#endif  // GRADPRUNE_NETCORE_LAYERS_HPP
