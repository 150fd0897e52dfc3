// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_PRUNE_SCHEDULE_HPP
#define GRADPRUNE_PRUNE_SCHEDULE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gradprune {

/// Round-half-up, the rounding rule for every parameter-count computation.
inline std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

/// Cubic sparsity ramp from (s_ini at t_ini) to (s_fin at t_fin), with
/// prune events every delta_t iterations.
struct PruneSchedule {
  double s_ini = 0.0;           // in [0, 1)
  double s_fin = 0.0;           // in (s_ini, 1)
  std::int64_t t_ini = 0;
  std::int64_t t_fin = 0;       // > t_ini
  std::int64_t delta_t = 0;     // > 0

  PruneSchedule() = default;
  PruneSchedule(double s_ini, double s_fin, std::int64_t t_ini, std::int64_t t_fin,
                std::int64_t delta_t);
};

/// Sparsity at iteration t:
///   s_t = s_fin + (s_ini - s_fin) * (1 - (t - t_ini)/(t_fin - t_ini))^3
/// Clamps to s_fin for t > t_fin; t < t_ini is a contract violation.
double scheduled_sparsity(const PruneSchedule& sched, std::int64_t t);

/// Desired active-parameter count at t: round_half_up((1 - s_t) * n_dense).
/// Non-increasing in t.
std::size_t target_count(const PruneSchedule& sched, std::int64_t t,
                         std::size_t n_dense);

struct ScheduleRow {
  std::int64_t t = 0;
  double sparsity = 0.0;
  std::size_t target = 0;
};

/// One row per event instant (t_ini, t_ini + delta_t, ...), always including
/// the t_fin endpoint.
std::vector<ScheduleRow> dump_schedule(const PruneSchedule& sched,
                                       std::size_t n_dense);

}  // namespace gradprune

#endif  // GRADPRUNE_PRUNE_SCHEDULE_HPP
