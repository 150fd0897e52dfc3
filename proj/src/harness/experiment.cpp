// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gradprune/errors.hpp"
#include "gradprune/harness/checkpoint.hpp"
#include "gradprune/netcore/optim.hpp"
#include "gradprune/netcore/rng.hpp"
#include "gradprune/prune/erk.hpp"
#include "gradprune/prune/event.hpp"
#include "gradprune/prune/policy.hpp"
#include "gradprune/prune/schedule.hpp"

namespace gradprune {

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

/// Splits on `sep` at parenthesis depth zero.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::size_t to_count(const std::string& s, const std::string& what) {
  if (s.empty() ||
      !std::all_of(s.begin(), s.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ConfigError("model: expected a number for " + what + ", got '" + s + "'");
  }
  return std::stoull(s);
}

/// Body of "name(body)" if the string has that shape.
bool paren_body(const std::string& s, const std::string& name, std::string* body) {
  if (s.size() < name.size() + 2 || s.compare(0, name.size() + 1, name + "(") != 0 ||
      s.back() != ')') {
    return false;
  }
  *body = s.substr(name.size() + 1, s.size() - name.size() - 2);
  return true;
}

std::vector<LayerSpec> expand_mlp(const std::string& body,
                                  const std::vector<std::size_t>& sample_shape) {
  std::vector<std::size_t> sizes;
  for (const auto& tok : split_top(body, '-')) sizes.push_back(to_count(tok, "mlp width"));
  if (sizes.empty()) throw ConfigError("model: mlp() needs at least one width");
  std::vector<LayerSpec> layers;
  layers.push_back(LayerSpec::flatten());
  std::size_t cur = shape_numel(sample_shape);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    layers.push_back(LayerSpec::fully_connected(cur, sizes[i]));
    if (i + 1 < sizes.size()) layers.push_back(LayerSpec::relu());
    cur = sizes[i];
  }
  return layers;
}

std::vector<LayerSpec> expand_cnn(const std::string& body,
                                  const std::vector<std::size_t>& sample_shape) {
  std::vector<std::size_t> sizes;
  for (const auto& tok : split_top(body, '-')) sizes.push_back(to_count(tok, "cnn width"));
  if (sizes.size() < 2) {
    throw ConfigError("model: cnn() needs at least one conv width and an output width");
  }
  if (sample_shape.size() != 3) {
    throw ConfigError("model: cnn() needs a CxHxW input, got rank " +
                      std::to_string(sample_shape.size()));
  }
  std::vector<LayerSpec> layers;
  std::vector<std::size_t> cur = sample_shape;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    layers.push_back(LayerSpec::conv2d(cur[0], sizes[i], 3, 3, 2, 1));
    cur = layers.back().output_shape(cur, layers.size() - 1);
    layers.push_back(LayerSpec::relu());
  }
  layers.push_back(LayerSpec::flatten());
  layers.push_back(LayerSpec::fully_connected(shape_numel(cur), sizes.back()));
  return layers;
}

LayerSpec parse_dsl_fc(const std::string& body, const std::vector<std::size_t>& cur) {
  if (cur.size() != 1) {
    throw ConfigError("model: fc needs a flat input; insert flatten first");
  }
  auto args = split_top(body, ',');
  std::size_t out = to_count(args[0], "fc width");
  bool bias = true;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "b") bias = true;
    else if (args[i] == "nb") bias = false;
    else throw ConfigError("model: unknown fc option '" + args[i] + "'");
  }
  return LayerSpec::fully_connected(cur[0], out, bias);
}

LayerSpec parse_dsl_conv(const std::string& body, const std::vector<std::size_t>& cur) {
  if (cur.size() != 3) {
    throw ConfigError("model: conv needs a CxHxW input, got rank " +
                      std::to_string(cur.size()));
  }
  auto args = split_top(body, ',');
  if (args.size() < 2) throw ConfigError("model: conv needs (channels, KHxKW)");
  std::size_t out_ch = to_count(args[0], "conv channels");
  auto kdims = split_top(args[1], 'x');
  if (kdims.size() != 2) throw ConfigError("model: conv kernel must be KHxKW");
  std::size_t kh = to_count(kdims[0], "kernel height");
  std::size_t kw = to_count(kdims[1], "kernel width");
  std::size_t stride = 1, padding = 0;
  bool bias = true;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "b") bias = true;
    else if (a == "nb") bias = false;
    else if (a.size() > 1 && a[0] == 's') stride = to_count(a.substr(1), "stride");
    else if (a.size() > 1 && a[0] == 'p') padding = to_count(a.substr(1), "padding");
    else throw ConfigError("model: unknown conv option '" + a + "'");
  }
  return LayerSpec::conv2d(cur[0], out_ch, kh, kw, stride, padding, bias);
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  const auto& shp = ds.images.shape();
  std::size_t dim = shp[1] * shp[2] * shp[3];
  Dataset out;
  out.images = Tensor({rows.size(), shp[1], shp[2], shp[3]});
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::memcpy(out.images.data() + i * dim, ds.images.data() + rows[i] * dim,
                dim * sizeof(double));
    out.labels[i] = ds.labels[rows[i]];
  }
  return out;
}

Batch make_batch(const Dataset& ds, const std::vector<std::size_t>& order,
                 std::size_t begin, std::size_t end) {
  const auto& shp = ds.images.shape();
  std::size_t dim = shp[1] * shp[2] * shp[3];
  Batch b;
  b.inputs = Tensor({end - begin, shp[1], shp[2], shp[3]});
  b.labels.resize(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    std::memcpy(b.inputs.data() + (i - begin) * dim,
                ds.images.data() + order[i] * dim, dim * sizeof(double));
    b.labels[i - begin] = ds.labels[order[i]];
  }
  return b;
}

/// Flips each sample left-right with probability 1/2 (one draw per sample,
/// in batch order).
void maybe_hflip(Batch& batch, std::mt19937_64& rng) {
  const auto& shp = batch.inputs.shape();
  std::size_t c = shp[1], h = shp[2], w = shp[3];
  for (std::size_t b = 0; b < shp[0]; ++b) {
    if (uniform_unit(rng) >= 0.5) continue;
    double* row = batch.inputs.data() + b * c * h * w;
    for (std::size_t ci = 0; ci < c; ++ci) {
      for (std::size_t hi = 0; hi < h; ++hi) {
        double* line = row + (ci * h + hi) * w;
        std::reverse(line, line + w);
      }
    }
  }
}

}  // namespace

std::vector<LayerSpec> parse_model(const std::string& descriptor,
                                   const std::vector<std::size_t>& sample_shape) {
  std::string d = strip_spaces(descriptor);
  if (d.empty()) throw ConfigError("model: empty descriptor");
  if (d.find("->") != std::string::npos) return parse_layer_list(d);
  std::string body;
  if (paren_body(d, "mlp", &body)) return expand_mlp(body, sample_shape);
  if (paren_body(d, "cnn", &body)) return expand_cnn(body, sample_shape);

  std::vector<LayerSpec> layers;
  std::vector<std::size_t> cur = sample_shape;
  for (const auto& tok : split_top(d, ',')) {
    LayerSpec spec = LayerSpec::relu();
    if (tok == "relu") spec = LayerSpec::relu();
    else if (tok == "flatten") spec = LayerSpec::flatten();
    else if (paren_body(tok, "fc", &body)) spec = parse_dsl_fc(body, cur);
    else if (paren_body(tok, "conv", &body)) spec = parse_dsl_conv(body, cur);
    else throw ConfigError("model: unknown layer '" + tok + "'");
    cur = spec.output_shape(cur, layers.size());
    layers.push_back(spec);
  }
  return layers;
}

DataSplits load_configured_data(const ExperimentConfig& cfg) {
  switch (cfg.data.kind) {
    case DatasetKind::Idx:
      return {load_idx(cfg.data.train_images, cfg.data.train_labels),
              load_idx(cfg.data.test_images, cfg.data.test_labels)};
    case DatasetKind::Cifar10:
      return {load_cifar10_bin(cfg.data.train_bins),
              load_cifar10_bin(cfg.data.test_bins)};
    case DatasetKind::Synthetic:
      break;
  }
  SyntheticSpec spec;
  spec.num_classes = cfg.data.classes;
  spec.samples_per_class = cfg.data.train_per_class + cfg.data.test_per_class;
  spec.input_shape = cfg.data.shape;
  spec.margin = cfg.data.margin;
  Dataset all = synthetic_dataset(spec, derive_seed(cfg.seed, rng_stream::kSynthetic));
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    std::size_t base = c * spec.samples_per_class;
    for (std::size_t i = 0; i < cfg.data.train_per_class; ++i) {
      train_rows.push_back(base + i);
    }
    for (std::size_t i = cfg.data.train_per_class; i < spec.samples_per_class; ++i) {
      test_rows.push_back(base + i);
    }
  }
  return {take_rows(all, train_rows), take_rows(all, test_rows)};
}

std::vector<std::size_t> epoch_permutation(std::uint64_t seed, std::size_t epoch,
                                           std::size_t n) {
  auto idx = iota_indices(n);
  std::mt19937_64 rng(derive_seed(seed, rng_stream::kShuffle, epoch));
  shuffle(idx, rng);
  return idx;
}

double evaluate(const Network& net, const SparsityMask& mask, const Dataset& ds) {
  constexpr std::size_t kEvalBatch = 256;
  std::size_t n = ds.size();
  if (n == 0) throw ConfigError("evaluate: empty dataset");
  auto order = iota_indices(n);
  std::size_t correct = 0;
  for (std::size_t start = 0; start < n; start += kEvalBatch) {
    std::size_t end = std::min(n, start + kEvalBatch);
    Batch batch = make_batch(ds, order, start, end);
    Tensor logits = forward(net, mask, batch);
    correct += count_correct(logits, batch.labels);
  }
  return double(correct) / double(n);
}

MetricsLog run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  auto clock_start = std::chrono::steady_clock::now();

  DataSplits data = load_configured_data(cfg);
  const std::size_t n_train = data.train.size();
  const std::size_t n_test = data.test.size();
  if (n_train == 0) throw ConfigError("training split is empty");
  if (n_test == 0) throw ConfigError("test split is empty");

  auto sample_shape = data.train.sample_shape();
  Network net(parse_model(cfg.model, sample_shape), sample_shape);
  const std::size_t n_dense = net.param_count();
  const std::string model_text = format_layer_list(net.layers());

  int max_lab = std::max(data.train.max_label(), data.test.max_label());
  if (std::size_t(max_lab) >= net.num_classes()) {
    throw ConfigError("model: output width " + std::to_string(net.num_classes()) +
                      " too small for label " + std::to_string(max_lab));
  }

  const std::size_t iters_per_epoch = (n_train + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_iters = iters_per_epoch * cfg.epochs;

  // The last prune event must land exactly on a delta_t boundary for the
  // final sparsity to hit s_fin, so the stop point rounds down to one.
  std::optional<PruneSchedule> sched;
  std::int64_t t_fin = 0;
  if (cfg.s_fin > cfg.s_ini) {
    auto t_stop = std::int64_t(round_half_up(cfg.prune_stop_fraction * double(total_iters)));
    t_fin = (t_stop / std::int64_t(cfg.delta_t)) * std::int64_t(cfg.delta_t);
    if (t_fin < std::int64_t(cfg.delta_t)) {
      throw ConfigError("delta_t: no prune event fits in the first " +
                        std::to_string(t_stop) +
                        " iterations; shrink delta_t or train longer");
    }
    sched.emplace(cfg.s_ini, cfg.s_fin, 0, t_fin, std::int64_t(cfg.delta_t));
  }

  SelectionPolicy policy(parse_ordering(cfg.order), parse_rate_mode(cfg.rate_mode),
                         cfg.rate);

  init_params(net, derive_seed(cfg.seed, rng_stream::kParamInit));
  SparsityMask mask;
  if (cfg.s_ini == 0.0) {
    mask = SparsityMask::ones(n_dense);
  } else {
    auto densities = erk_allocate(net.layers(), cfg.s_ini);
    mask = sparse_init_mask(net, densities,
                            derive_seed(cfg.seed, rng_stream::kSparseMask));
    for (std::size_t i = 0; i < n_dense; ++i) {
      if (!mask.active(i)) net.params()[i] = 0.0;
    }
  }

  OptimizerState opt(n_dense, cfg.lr, cfg.momentum, cfg.weight_decay,
                     cfg.lr_decay_epochs, cfg.lr_decay_factor);

  MetricsLog log;
  log.dense_count = n_dense;
  if (!cfg.metrics_path.empty()) log.open(cfg.metrics_path);
  {
    nlohmann::json j;
    j["type"] = "run_start";
    j["model"] = model_text;
    j["n_dense"] = n_dense;
    j["n_train"] = n_train;
    j["n_test"] = n_test;
    j["iters_per_epoch"] = iters_per_epoch;
    j["total_iters"] = total_iters;
    j["t_fin"] = t_fin;
    j["initial_active"] = mask.active_count();
    j["seed"] = cfg.seed;
    // Output paths do not affect the trajectory; blanking them keeps the
    // log byte-identical no matter where it is written.
    ExperimentConfig echo = cfg;
    echo.metrics_path.clear();
    echo.checkpoint_path.clear();
    j["config"] = config_text(echo);
    log.append(j.dump());
  }

  std::int64_t t = 0;
  try {
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      auto order = epoch_permutation(cfg.seed, epoch, n_train);
      std::mt19937_64 aug_rng(derive_seed(cfg.seed, rng_stream::kAugment, epoch));
      double loss_sum = 0.0;
      std::size_t correct = 0;
      for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
        std::size_t end = std::min(n_train, start + cfg.batch_size);
        Batch batch = make_batch(data.train, order, start, end);
        if (cfg.augment_hflip) maybe_hflip(batch, aug_rng);
        ++t;
        BackwardResult res = loss_and_backward(net, mask, batch);
        loss_sum += res.loss * double(end - start);
        correct += res.correct;
        if (sched && t % std::int64_t(cfg.delta_t) == 0 && t <= t_fin) {
          PruneEventRecord rec = prune_event(net, mask, *sched, policy, opt, t);
          log.append(rec.to_json_line());
        }
        sgd_step(net, mask, opt);
      }
      const double epoch_lr = opt.lr;
      apply_lr_schedule(opt, epoch + 1);

      double train_loss = loss_sum / double(n_train);
      double train_acc = double(correct) / double(n_train);
      double test_acc = evaluate(net, mask, data.test);
      double sparsity = 1.0 - double(mask.active_count()) / double(n_dense);
      nlohmann::json j;
      j["type"] = "epoch";
      j["epoch"] = epoch + 1;
      j["iter"] = t;
      j["lr"] = epoch_lr;
      j["train_loss"] = train_loss;
      j["train_acc"] = train_acc;
      j["test_acc"] = test_acc;
      j["active"] = mask.active_count();
      j["sparsity"] = sparsity;
      log.append(j.dump());
      log.final_train_loss = train_loss;
      log.final_test_accuracy = test_acc;
      log.best_test_accuracy = std::max(log.best_test_accuracy, test_acc);
    }

    if (sched) {
      std::size_t want = target_count(*sched, t_fin, n_dense);
      if (mask.active_count() != want) {
        throw std::logic_error("final active count " +
                               std::to_string(mask.active_count()) +
                               " does not match the scheduled " +
                               std::to_string(want));
      }
    }

    nlohmann::json j;
    j["type"] = "run_end";
    j["epochs"] = cfg.epochs;
    j["final_active"] = mask.active_count();
    j["final_sparsity"] = 1.0 - double(mask.active_count()) / double(n_dense);
    j["final_test_acc"] = log.final_test_accuracy;
    j["best_test_acc"] = log.best_test_accuracy;
    log.append(j.dump());

    if (!cfg.checkpoint_path.empty()) {
      Checkpoint ck;
      ck.model = model_text;
      ck.input_shape = sample_shape;
      ck.iter = t;
      ck.epoch = cfg.epochs;
      ck.lr = opt.lr;
      ck.momentum = opt.momentum;
      ck.weight_decay = opt.weight_decay;
      ck.lr_decay_factor = opt.lr_decay_factor;
      ck.lr_decay_epochs = opt.lr_decay_epochs;
      ck.decay_cursor = opt.decay_cursor;
      ck.params = net.params();
      ck.velocity = opt.momentum_buffers;
      ck.mask.assign(mask.bits().begin(), mask.bits().end());
      save_checkpoint(cfg.checkpoint_path, ck);
    }
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["type"] = "abort";
    j["iter"] = t;
    j["error"] = e.what();
    log.append(j.dump());
    throw;
  }

  log.final_active = mask.active_count();
  log.final_sparsity = 1.0 - double(mask.active_count()) / double(n_dense);
  log.completed = true;
  log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start)
          .count();
  return log;
}

}  // namespace gradprune
