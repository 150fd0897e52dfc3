// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_DATASET_HPP
#define GRADPRUNE_HARNESS_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gradprune/netcore/tensor.hpp"

namespace gradprune {

/// Labeled image set. images is [N, C, H, W] with values in [0, 1].
struct Dataset {
  Tensor images;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  /// Sample shape {C, H, W}.
  std::vector<std::size_t> sample_shape() const;
  int max_label() const;
};

/// Parses a big-endian IDX image/label file pair (ubyte payload). Pixel
/// values are normalized to [0, 1]. Image and label counts must match.
/// Throws FormatError with the offending byte offset.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// Writes a single-channel dataset as an IDX image/label file pair,
/// quantizing pixels to ubyte. Inverse of load_idx up to quantization.
void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path);

/// Reads CIFAR-10 binary batches (records of 1 label byte + 3072 pixel
/// bytes). Each file length must be divisible by 3073; files concatenate.
Dataset load_cifar10_bin(const std::vector<std::string>& paths);

/// Gaussian class blobs: per class a random mean image, samples are the
/// mean plus isotropic noise, clamped to [0, 1]. `margin` is the ratio of
/// the per-coordinate mean spread to the noise sigma; large margins make
/// the classes linearly separable.
struct SyntheticSpec {
  std::size_t num_classes = 10;
  std::size_t samples_per_class = 100;
  std::vector<std::size_t> input_shape = {1, 28, 28};  // {C, H, W}
  double margin = 2.0;
};

Dataset synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_DATASET_HPP
