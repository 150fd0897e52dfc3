// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/mask.hpp"

#include <stdexcept>
#include <string>

namespace gradprune {

SparsityMask SparsityMask::ones(std::size_t n) {
  SparsityMask m;
  m.bits_.assign(n, 1);
  m.active_count_ = n;
  return m;
}

SparsityMask SparsityMask::from_kept_indices(std::size_t n,
                                             const std::vector<std::size_t>& kept) {
  SparsityMask m;
  m.bits_.assign(n, 0);
  for (std::size_t i : kept) {
    if (i >= n) throw std::invalid_argument("mask: kept index out of range");
    if (m.bits_[i]) throw std::invalid_argument("mask: duplicate kept index");
    m.bits_[i] = 1;
  }
  m.active_count_ = kept.size();
  return m;
}

void SparsityMask::clear(std::size_t i) {
  if (i >= bits_.size()) throw std::invalid_argument("mask: index out of range");
  if (!bits_[i]) {
    throw std::logic_error("mask: index " + std::to_string(i) + " already pruned");
  }
  bits_[i] = 0;
  --active_count_;
}

std::size_t SparsityMask::recount() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits_) n += b;
  return n;
}

}  // namespace gradprune
