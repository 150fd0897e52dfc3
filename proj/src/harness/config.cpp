// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "gradprune/errors.hpp"
#include "gradprune/prune/policy.hpp"

namespace gradprune {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& want) {
  throw ConfigError(key + ": expected " + want + ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) bad_value(key, value, "a number");
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const char* end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::size_t> parse_count_list(const std::string& key,
                                          const std::string& value) {
  std::vector<std::size_t> out;
  if (trim(value).empty()) return out;
  for (const auto& part : split(value, ',')) out.push_back(parse_count(key, part));
  return out;
}

std::vector<std::size_t> parse_shape(const std::string& key,
                                     const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& part : split(value, 'x')) out.push_back(parse_count(key, part));
  if (out.size() != 3) bad_value(key, value, "CxHxW");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string join_counts(const std::vector<std::size_t>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "model") cfg.model = value;
  else if (key == "dataset") {
    if (value == "synthetic") cfg.data.kind = DatasetKind::Synthetic;
    else if (value == "idx") cfg.data.kind = DatasetKind::Idx;
    else if (value == "cifar10") cfg.data.kind = DatasetKind::Cifar10;
    else bad_value(key, value, "synthetic, idx or cifar10");
  } else if (key == "train_images") cfg.data.train_images = value;
  else if (key == "train_labels") cfg.data.train_labels = value;
  else if (key == "test_images") cfg.data.test_images = value;
  else if (key == "test_labels") cfg.data.test_labels = value;
  else if (key == "train_bins") {
    cfg.data.train_bins = trim(value).empty() ? std::vector<std::string>{}
                                              : split(value, ',');
  } else if (key == "test_bins") {
    cfg.data.test_bins = trim(value).empty() ? std::vector<std::string>{}
                                             : split(value, ',');
  }
  else if (key == "classes") cfg.data.classes = parse_count(key, value);
  else if (key == "train_per_class") cfg.data.train_per_class = parse_count(key, value);
  else if (key == "test_per_class") cfg.data.test_per_class = parse_count(key, value);
  else if (key == "input_shape") cfg.data.shape = parse_shape(key, value);
  else if (key == "margin") cfg.data.margin = parse_double(key, value);
  else if (key == "epochs") cfg.epochs = parse_count(key, value);
  else if (key == "batch_size") cfg.batch_size = parse_count(key, value);
  else if (key == "lr") cfg.lr = parse_double(key, value);
  else if (key == "momentum") cfg.momentum = parse_double(key, value);
  else if (key == "weight_decay") cfg.weight_decay = parse_double(key, value);
  else if (key == "lr_decay_epochs") cfg.lr_decay_epochs = parse_count_list(key, value);
  else if (key == "lr_decay_factor") cfg.lr_decay_factor = parse_double(key, value);
  else if (key == "s_ini") cfg.s_ini = parse_double(key, value);
  else if (key == "s_fin") cfg.s_fin = parse_double(key, value);
  else if (key == "prune_stop_fraction") cfg.prune_stop_fraction = parse_double(key, value);
  else if (key == "delta_t") cfg.delta_t = parse_count(key, value);
  else if (key == "order") cfg.order = value;
  else if (key == "rate_mode") cfg.rate_mode = value;
  else if (key == "rate") cfg.rate = parse_double(key, value);
  else if (key == "augment_hflip") cfg.augment_hflip = parse_bool(key, value);
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "metrics_path") cfg.metrics_path = value;
  else if (key == "checkpoint_path") cfg.checkpoint_path = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.model.empty()) throw ConfigError("model: must not be empty");
  if (cfg.epochs == 0) throw ConfigError("epochs: must be > 0");
  if (cfg.batch_size == 0) throw ConfigError("batch_size: must be > 0");
  if (!(cfg.lr > 0.0)) throw ConfigError("lr: must be > 0");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    throw ConfigError("momentum: must be in [0, 1)");
  }
  if (!(cfg.weight_decay >= 0.0)) throw ConfigError("weight_decay: must be >= 0");
  if (!(cfg.lr_decay_factor > 0.0)) throw ConfigError("lr_decay_factor: must be > 0");
  for (std::size_t e : cfg.lr_decay_epochs) {
    if (e == 0) throw ConfigError("lr_decay_epochs: epochs are 1-based, got 0");
  }
  if (!(cfg.s_ini >= 0.0 && cfg.s_ini < 1.0)) {
    throw ConfigError("s_ini: must be in [0, 1)");
  }
  if (!(cfg.s_fin >= cfg.s_ini && cfg.s_fin < 1.0)) {
    throw ConfigError("s_fin: must be in [s_ini, 1)");
  }
  if (!(cfg.prune_stop_fraction > 0.0 && cfg.prune_stop_fraction <= 1.0)) {
    throw ConfigError("prune_stop_fraction: must be in (0, 1]");
  }
  if (cfg.delta_t == 0) throw ConfigError("delta_t: must be > 0");
  parse_ordering(cfg.order);
  parse_rate_mode(cfg.rate_mode);
  if (!(cfg.rate > 0.0 && cfg.rate <= 1.0)) {
    throw ConfigError("rate: must be in (0, 1]");
  }
  switch (cfg.data.kind) {
    case DatasetKind::Idx:
      if (cfg.data.train_images.empty() || cfg.data.train_labels.empty() ||
          cfg.data.test_images.empty() || cfg.data.test_labels.empty()) {
        throw ConfigError(
            "dataset=idx needs train_images, train_labels, test_images, "
            "test_labels");
      }
      break;
    case DatasetKind::Cifar10:
      if (cfg.data.train_bins.empty() || cfg.data.test_bins.empty()) {
        throw ConfigError("dataset=cifar10 needs train_bins and test_bins");
      }
      break;
    case DatasetKind::Synthetic:
      if (cfg.data.classes < 2) throw ConfigError("classes: must be >= 2");
      if (cfg.data.train_per_class == 0) {
        throw ConfigError("train_per_class: must be > 0");
      }
      if (cfg.data.test_per_class == 0) {
        throw ConfigError("test_per_class: must be > 0");
      }
      if (cfg.data.shape.size() != 3) throw ConfigError("input_shape: must be CxHxW");
      for (std::size_t d : cfg.data.shape) {
        if (d == 0) throw ConfigError("input_shape: extents must be > 0");
      }
      if (!(cfg.data.margin > 0.0)) throw ConfigError("margin: must be > 0");
      break;
  }
}

std::string config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "model = " << cfg.model << "\n";
  switch (cfg.data.kind) {
    case DatasetKind::Synthetic:
      out << "dataset = synthetic\n";
      out << "classes = " << cfg.data.classes << "\n";
      out << "train_per_class = " << cfg.data.train_per_class << "\n";
      out << "test_per_class = " << cfg.data.test_per_class << "\n";
      out << "input_shape = " << join_counts(cfg.data.shape, 'x') << "\n";
      out << "margin = " << format_double(cfg.data.margin) << "\n";
      break;
    case DatasetKind::Idx:
      out << "dataset = idx\n";
      out << "train_images = " << cfg.data.train_images << "\n";
      out << "train_labels = " << cfg.data.train_labels << "\n";
      out << "test_images = " << cfg.data.test_images << "\n";
      out << "test_labels = " << cfg.data.test_labels << "\n";
      break;
    case DatasetKind::Cifar10:
      out << "dataset = cifar10\n";
      out << "train_bins = " << join_strings(cfg.data.train_bins) << "\n";
      out << "test_bins = " << join_strings(cfg.data.test_bins) << "\n";
      break;
  }
  out << "epochs = " << cfg.epochs << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "lr = " << format_double(cfg.lr) << "\n";
  out << "momentum = " << format_double(cfg.momentum) << "\n";
  out << "weight_decay = " << format_double(cfg.weight_decay) << "\n";
  out << "lr_decay_epochs = " << join_counts(cfg.lr_decay_epochs, ',') << "\n";
  out << "lr_decay_factor = " << format_double(cfg.lr_decay_factor) << "\n";
  out << "s_ini = " << format_double(cfg.s_ini) << "\n";
  out << "s_fin = " << format_double(cfg.s_fin) << "\n";
  out << "prune_stop_fraction = " << format_double(cfg.prune_stop_fraction) << "\n";
  out << "delta_t = " << cfg.delta_t << "\n";
  out << "order = " << cfg.order << "\n";
  out << "rate_mode = " << cfg.rate_mode << "\n";
  out << "rate = " << format_double(cfg.rate) << "\n";
  out << "augment_hflip = " << (cfg.augment_hflip ? "true" : "false") << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "metrics_path = " << cfg.metrics_path << "\n";
  out << "checkpoint_path = " << cfg.checkpoint_path << "\n";
  return out.str();
}

}  // namespace gradprune
