// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/netcore/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace gradprune {

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {
  for (std::size_t e : shape_) {
    if (e == 0) throw std::invalid_argument("tensor extent must be >= 1");
  }
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (std::size_t e : shape_) {
    if (e == 0) throw std::invalid_argument("tensor extent must be >= 1");
  }
  if (shape_numel(shape_) != data_.size()) {
    throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                " does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  if (shape_numel(shape) != data_.size()) {
    throw std::invalid_argument("reshape " + shape_string(shape_) + " -> " +
                                shape_string(shape) + " changes element count");
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace gradprune
