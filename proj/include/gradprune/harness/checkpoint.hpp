// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_CHECKPOINT_HPP
#define GRADPRUNE_HARNESS_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gradprune {

/// Serializable training state: everything needed to rebuild the network,
/// mask and optimizer exactly. The on-disk form is a versioned little-endian
/// binary container; save followed by load is bit-exact, so saving the
/// loaded copy reproduces the file byte for byte.
struct Checkpoint {
  std::string model;                      // canonical layer list text
  std::vector<std::size_t> input_shape;   // one training sample, e.g. {1,28,28}
  std::int64_t iter = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double momentum = 0.0;
  double weight_decay = 0.0;
  double lr_decay_factor = 1.0;
  std::vector<std::size_t> lr_decay_epochs;
  std::size_t decay_cursor = 0;
  std::vector<double> params;
  std::vector<double> velocity;           // momentum buffers, same length
  std::vector<std::uint8_t> mask;         // 0/1 per parameter, same length
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);

/// Throws FormatError (with the byte offset) on bad magic, unsupported
/// version, or truncation.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_CHECKPOINT_HPP
