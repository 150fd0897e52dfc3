// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_NETCORE_NETWORK_HPP
#define GRADPRUNE_NETCORE_NETWORK_HPP

#include <cstdint>
#include <vector>

#include "gradprune/netcore/layers.hpp"
#include "gradprune/netcore/tensor.hpp"
#include "gradprune/prune/mask.hpp"

namespace gradprune {

/// One minibatch: inputs [B, ...sample shape], labels of length B.
struct Batch {
  Tensor inputs;
  std::vector<int> labels;
};

struct BackwardResult {
  double loss = 0.0;
  std::size_t correct = 0;  // argmax(logits) == label, over the batch
};

/// Ordered layer list over a single flat parameter store. Each trainable
/// layer owns a contiguous [offset, offset+count) slice (weights, then
/// bias); the slices partition [0, param_count) exactly. grads is a
/// parallel flat array.
class Network {
public:
  struct Range {
    std::size_t offset = 0;
    std::size_t count = 0;
  };

  /// Validates the whole layer stack against input_shape (sample shape,
  /// no batch dim); throws ConfigError naming the offending layer.
  Network(std::vector<LayerSpec> layers, std::vector<std::size_t> input_shape);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  const std::vector<std::size_t>& input_shape() const { return input_shape_; }

  /// Output sample shape of layer i (layer_output_shape(size()-1) is the
  /// network output shape).
  const std::vector<std::size_t>& layer_output_shape(std::size_t i) const {
    return out_shapes_[i];
  }

  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& grads() { return grads_; }
  const std::vector<double>& grads() const { return grads_; }

  Range layer_range(std::size_t layer_index) const { return ranges_[layer_index]; }
  std::size_t layer_of_param(std::size_t param_index) const;

  /// Width of the final (rank-1) output; throws ConfigError if the network
  /// does not end in a flat vector.
  std::size_t num_classes() const;

private:
  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> input_shape_;
  std::vector<std::vector<std::size_t>> out_shapes_;
  std::vector<Range> ranges_;
  std::vector<double> params_;
  std::vector<double> grads_;
};

/// He-uniform weights (bound sqrt(6/fan_in)), biases zero. Gradients reset.
/// Fully determined by seed.
void init_params(Network& net, std::uint64_t seed);

/// Runs the network on a batch with the mask applied multiplicatively
/// (effective parameter = theta_i * m_i). Returns logits [B, C].
Tensor forward(const Network& net, const SparsityMask& mask, const Batch& batch);

/// Mean softmax cross-entropy and full backward pass; writes d(loss)/d(theta_i)
/// for every parameter into net.grads(). Gradients flow through the
/// multiplicative mask, so pruned entries get exactly 0. Bit-reproducible
/// for identical state.
BackwardResult loss_and_backward(Network& net, const SparsityMask& mask,
                                 const Batch& batch);

/// Mean softmax cross-entropy of precomputed logits (row max subtracted
/// before exponentiation). Throws NumericError on a non-finite result.
double cross_entropy(const Tensor& logits, const std::vector<int>& labels);

std::size_t count_correct(const Tensor& logits, const std::vector<int>& labels);

}  // namespace gradprune

#endif  // GRADPRUNE_NETCORE_NETWORK_HPP
