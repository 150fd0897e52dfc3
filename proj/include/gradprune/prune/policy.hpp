// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_POLICY_HPP
#define GRADPRUNE_PRUNE_POLICY_HPP

#include <cstddef>
#include <cstdint>
#include <string>

namespace gradprune {

/// Which magnitude drives the first of the two selection stages.
/// GradientFirst culls by small |g| then prunes by small |theta|;
/// MagnitudeFirst is the reverse.
enum class Ordering { GradientFirst, MagnitudeFirst };

/// How the stage-1 pool size is derived at an event with n_active survivors
/// and n_prune parameters to remove.
///   Fixed(r):          floor(r * n_active)
///   Cosine(r_ini):     floor(r_ini * (1 + cos(pi*progress))/2 * n_active),
///                      progress = (t - t_ini)/(t_fin - t_ini)
///   GraNetAbsolute(p): n_prune + floor(p * n_target), n_target = n_active - n_prune
/// All modes clamp into [n_prune, n_active].
enum class RateMode { Fixed, Cosine, GraNetAbsolute };

struct SelectionPolicy {
  Ordering order = Ordering::GradientFirst;
  RateMode rate_mode = RateMode::Fixed;
  double rate = 0.5;  // r, r_ini or p depending on the mode; in (0, 1]

  SelectionPolicy() = default;
  SelectionPolicy(Ordering order, RateMode mode, double rate);

  std::string describe() const;
};

Ordering parse_ordering(const std::string& name);
RateMode parse_rate_mode(const std::string& name);
std::string ordering_name(Ordering o);
std::string rate_mode_name(RateMode m);

/// Stage-1 pool size for an event at iteration t.
std::size_t pool_size(const SelectionPolicy& policy, std::size_t n_active,
                      std::size_t n_prune, std::int64_t t, std::int64_t t_ini,
                      std::int64_t t_fin);

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_POLICY_HPP
