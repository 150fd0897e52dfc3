// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_MASK_HPP
#define GRADPRUNE_PRUNE_MASK_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gradprune {

/// Per-parameter keep/prune state aligned with the flat parameter array.
/// Bits only ever go from 1 to 0 (no regrowth), so the active set is
/// monotone non-increasing over a run. active_count() is cached and always
/// equals the popcount of the bit array.
class SparsityMask {
public:
  SparsityMask() = default;

  /// All-ones mask over n parameters.
  static SparsityMask ones(std::size_t n);

  /// Mask with exactly the given indices kept; everything else pruned.
  static SparsityMask from_kept_indices(std::size_t n,
                                        const std::vector<std::size_t>& kept);

  bool active(std::size_t i) const { return bits_[i] != 0; }

  /// Prunes index i. Clearing an already-clear bit is a logic error.
  void clear(std::size_t i);

  std::size_t size() const { return bits_.size(); }
  std::size_t active_count() const { return active_count_; }

  /// O(n) popcount, for invariant checks against the cached count.
  std::size_t recount() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
  std::vector<std::uint8_t> bits_;
  std::size_t active_count_ = 0;
};

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_MASK_HPP
