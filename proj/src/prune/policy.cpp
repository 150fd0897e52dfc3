// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gradprune/errors.hpp"

namespace gradprune {

SelectionPolicy::SelectionPolicy(Ordering order_, RateMode mode_, double rate_)
    : order(order_), rate_mode(mode_), rate(rate_) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw ConfigError("selection policy: rate must be in (0, 1]");
  }
}

std::string SelectionPolicy::describe() const {
  return ordering_name(order) + "/" + rate_mode_name(rate_mode) + "(" +
         std::to_string(rate) + ")";
}

Ordering parse_ordering(const std::string& name) {
  if (name == "gradient_first") return Ordering::GradientFirst;
  if (name == "magnitude_first") return Ordering::MagnitudeFirst;
  throw ConfigError("order: expected gradient_first or magnitude_first, got '" +
                    name + "'");
}

RateMode parse_rate_mode(const std::string& name) {
  if (name == "fixed") return RateMode::Fixed;
  if (name == "cosine") return RateMode::Cosine;
  if (name == "granet_abs") return RateMode::GraNetAbsolute;
  throw ConfigError("rate_mode: expected fixed, cosine or granet_abs, got '" + name +
                    "'");
}

std::string ordering_name(Ordering o) {
  return o == Ordering::GradientFirst ? "gradient_first" : "magnitude_first";
}

std::string rate_mode_name(RateMode m) {
  switch (m) {
    case RateMode::Fixed:
      return "fixed";
    case RateMode::Cosine:
      return "cosine";
    case RateMode::GraNetAbsolute:
      return "granet_abs";
  }
  return "?";
}

std::size_t pool_size(const SelectionPolicy& policy, std::size_t n_active,
                      std::size_t n_prune, std::int64_t t, std::int64_t t_ini,
                      std::int64_t t_fin) {
  if (n_prune == 0 || n_prune > n_active) {
    throw std::invalid_argument("pool_size: need 0 < n_prune <= n_active");
  }
  double raw = 0.0;
  switch (policy.rate_mode) {
    case RateMode::Fixed:
      raw = std::floor(policy.rate * static_cast<double>(n_active));
      break;
    case RateMode::Cosine: {
      if (t_fin <= t_ini) {
        throw std::invalid_argument("pool_size: cosine mode needs t_fin > t_ini");
      }
      const double progress = static_cast<double>(t - t_ini) /
                              static_cast<double>(t_fin - t_ini);
      const double r_t = policy.rate * (1.0 + std::cos(std::numbers::pi * progress)) / 2.0;
      raw = std::floor(r_t * static_cast<double>(n_active));
      break;
    }
    case RateMode::GraNetAbsolute: {
      const double n_target = static_cast<double>(n_active - n_prune);
      raw = static_cast<double>(n_prune) + std::floor(policy.rate * n_target);
      break;
    }
  }
  const std::size_t pool = raw < 0.0 ? 0 : static_cast<std::size_t>(raw);
  return std::clamp(pool, n_prune, n_active);
}

}  // namespace gradprune
