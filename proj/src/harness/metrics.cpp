// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/metrics.hpp"

#include "gradprune/errors.hpp"

namespace gradprune {

void MetricsLog::open(const std::string& path) {
  auto file = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*file) throw FormatError("cannot write metrics file " + path);
  file_ = std::move(file);
  for (const auto& line : lines_) *file_ << line << "\n";
  file_->flush();
}

void MetricsLog::append(const std::string& json_line) {
  lines_.push_back(json_line);
  if (file_) {
    *file_ << json_line << "\n";
    file_->flush();
  }
}

std::string MetricsLog::text() const {
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace gradprune
