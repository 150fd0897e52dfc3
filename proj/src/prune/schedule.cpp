// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/prune/schedule.hpp"

#include <stdexcept>
#include <string>

#include "gradprune/errors.hpp"

namespace gradprune {

PruneSchedule::PruneSchedule(double s_ini_, double s_fin_, std::int64_t t_ini_,
                             std::int64_t t_fin_, std::int64_t delta_t_)
    : s_ini(s_ini_), s_fin(s_fin_), t_ini(t_ini_), t_fin(t_fin_), delta_t(delta_t_) {
  if (s_ini < 0.0 || s_ini >= 1.0) throw ConfigError("schedule: s_ini must be in [0, 1)");
  if (s_fin <= s_ini || s_fin >= 1.0) {
    throw ConfigError("schedule: s_fin must be in (s_ini, 1)");
  }
  if (t_fin <= t_ini) throw ConfigError("schedule: t_fin must be > t_ini");
  if (delta_t <= 0) throw ConfigError("schedule: delta_t must be positive");
}

double scheduled_sparsity(const PruneSchedule& sched, std::int64_t t) {
  if (t < sched.t_ini) {
    throw std::invalid_argument("scheduled_sparsity: t=" + std::to_string(t) +
                                " before t_ini=" + std::to_string(sched.t_ini));
  }
  if (t >= sched.t_fin) return sched.s_fin;
  const double progress = static_cast<double>(t - sched.t_ini) /
                          static_cast<double>(sched.t_fin - sched.t_ini);
  const double rem = 1.0 - progress;
  return sched.s_fin + (sched.s_ini - sched.s_fin) * rem * rem * rem;
}

std::size_t target_count(const PruneSchedule& sched, std::int64_t t,
                         std::size_t n_dense) {
  if (n_dense == 0) throw std::invalid_argument("target_count: n_dense must be > 0");
  const double s = scheduled_sparsity(sched, t);
  return round_half_up((1.0 - s) * static_cast<double>(n_dense));
}

std::vector<ScheduleRow> dump_schedule(const PruneSchedule& sched,
                                       std::size_t n_dense) {
  std::vector<ScheduleRow> rows;
  for (std::int64_t t = sched.t_ini; t <= sched.t_fin; t += sched.delta_t) {
    rows.push_back({t, scheduled_sparsity(sched, t), target_count(sched, t, n_dense)});
  }
  if (rows.empty() || rows.back().t != sched.t_fin) {
    rows.push_back({sched.t_fin, sched.s_fin, target_count(sched, sched.t_fin, n_dense)});
  }
  return rows;
}

}  // namespace gradprune
