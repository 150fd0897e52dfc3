// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_NETCORE_TENSOR_HPP
#define GRADPRUNE_NETCORE_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace gradprune {

/// Dense n-dimensional array of doubles, flat row-major storage.
/// Invariant: product(shape) == data.size(), every extent >= 1.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t dim) const { return shape_[dim]; }
  std::size_t numel() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Same storage under a new shape; element count must match.
  Tensor reshaped(std::vector<std::size_t> shape) const;

  void fill(double v);

  static std::string shape_string(const std::vector<std::size_t>& shape);

private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

inline std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return shape.empty() ? 0 : n;
}

}  // namespace gradprune

#endif  // GRADPRUNE_NETCORE_TENSOR_HPP
