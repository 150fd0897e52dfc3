// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#ifndef GRADPRUNE_HARNESS_METRICS_HPP
#define GRADPRUNE_HARNESS_METRICS_HPP

#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace gradprune {

/// Run log: one JSON record per line, in emission order (run_start, then
/// epoch and prune_event records, then run_end). Lines are mirrored to a
/// file as they arrive, flushed per record, so an aborted run leaves a
/// readable partial log. Serialized records carry no timing, so a repeated
/// (config, seed) run reproduces the file byte for byte; wall-clock lives
/// only in the in-memory summary below.
class MetricsLog {
 public:
  MetricsLog() = default;

  /// Starts mirroring appended lines to `path`. Throws FormatError if the
  /// file cannot be created.
  void open(const std::string& path);

  /// Stores one serialized record and mirrors it to the open file.
  void append(const std::string& json_line);

  const std::vector<std::string>& lines() const { return lines_; }

  /// Whole log as text, one record per line with trailing newline.
  std::string text() const;

  // Summary fields the experiment driver fills in as it goes.
  double final_test_accuracy = 0.0;
  double best_test_accuracy = 0.0;
  double final_train_loss = 0.0;
  double final_sparsity = 0.0;
  std::size_t final_active = 0;
  std::size_t dense_count = 0;
  double wall_seconds = 0.0;
  bool completed = false;

 private:
  std::vector<std::string> lines_;
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace gradprune

#endif  // GRADPRUNE_HARNESS_METRICS_HPP
