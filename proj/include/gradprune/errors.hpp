// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_ERRORS_HPP
#define GRADPRUNE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gradprune {

/// Invalid model/schedule/experiment configuration, detected before any work runs.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (IDX, CIFAR binary, checkpoint). Message carries the byte offset.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value where a finite one is required (e.g. diverged loss).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gradprune

#endif  // GRADPRUNE_ERRORS_HPP
