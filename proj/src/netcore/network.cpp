// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/netcore/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/rng.hpp"

namespace gradprune {

Network::Network(std::vector<LayerSpec> layers, std::vector<std::size_t> input_shape)
    : layers_(std::move(layers)), input_shape_(std::move(input_shape)) {
  if (layers_.empty()) throw ConfigError("network: layer list is empty");
  if (input_shape_.empty()) throw ConfigError("network: input shape is empty");

  std::vector<std::size_t> shape = input_shape_;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    shape = layers_[i].output_shape(shape, i);
    out_shapes_.push_back(shape);
    const std::size_t count = layers_[i].param_count();
    ranges_.push_back({offset, count});
    offset += count;
  }
  params_.assign(offset, 0.0);
  grads_.assign(offset, 0.0);
}

std::size_t Network::layer_of_param(std::size_t param_index) const {
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (ranges_[i].count != 0 && param_index >= ranges_[i].offset &&
        param_index < ranges_[i].offset + ranges_[i].count) {
      return i;
    }
  }
  throw std::out_of_range("parameter index " + std::to_string(param_index) +
                          " outside [0, " + std::to_string(params_.size()) + ")");
}

std::size_t Network::num_classes() const {
  const auto& out = out_shapes_.back();
  if (out.size() != 1) {
    throw ConfigError("network output is not a flat vector: " +
                      Tensor::shape_string(out));
  }
  return out[0];
}

void init_params(Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto& p = net.params();
  std::fill(p.begin(), p.end(), 0.0);
  std::fill(net.grads().begin(), net.grads().end(), 0.0);
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& layer = net.layers()[i];
    if (!layer.trainable()) continue;
    const auto range = net.layer_range(i);
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.fan_in()));
    for (std::size_t w = 0; w < layer.weight_count(); ++w) {
      p[range.offset + w] = uniform_real(rng, -bound, bound);
    }
    // biases stay zero
  }
}

namespace {

// Per-layer forward state kept for the backward pass. eff holds the masked
// (effective) parameter slice for trainable layers.
struct Trace {
  std::vector<Tensor> acts;                  // acts[0] = input, acts[i+1] = layer i out
  std::vector<std::vector<double>> eff;      // one entry per layer (empty if untrainable)
};

void check_batch(const Network& net, const Batch& batch) {
  const auto& in = batch.inputs.shape();
  const auto& expect = net.input_shape();
  bool ok = in.size() == expect.size() + 1 && in[0] == batch.labels.size();
  for (std::size_t d = 0; ok && d < expect.size(); ++d) ok = in[d + 1] == expect[d];
  if (!ok) {
    throw ConfigError("batch inputs " + Tensor::shape_string(in) +
                      " do not match network input " + Tensor::shape_string(expect) +
                      " with " + std::to_string(batch.labels.size()) + " labels");
  }
}

std::vector<double> masked_params(const Network& net, const SparsityMask& mask,
                                  Network::Range range) {
  std::vector<double> eff(range.count);
  const auto& p = net.params();
  for (std::size_t k = 0; k < range.count; ++k) {
    const std::size_t i = range.offset + k;
    eff[k] = mask.active(i) ? p[i] : 0.0;
  }
  return eff;
}

Tensor fc_forward(const LayerSpec& l, const Tensor& x, const std::vector<double>& eff) {
  const std::size_t batch = x.extent(0);
  const std::size_t in = l.in_features, out = l.out_features;
  const double* w = eff.data();
  const double* bias = l.has_bias ? eff.data() + in * out : nullptr;
  Tensor y({batch, out});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xr = x.data() + b * in;
    double* yr = y.data() + b * out;
    for (std::size_t o = 0; o < out; ++o) {
      const double* wr = w + o * in;
      double acc = bias ? bias[o] : 0.0;
      for (std::size_t i = 0; i < in; ++i) acc += xr[i] * wr[i];
      yr[o] = acc;
    }
  }
  return y;
}

// dY -> dX, accumulating parameter grads into d_eff.
Tensor fc_backward(const LayerSpec& l, const Tensor& x, const std::vector<double>& eff,
                   const Tensor& dy, std::vector<double>& d_eff) {
  const std::size_t batch = x.extent(0);
  const std::size_t in = l.in_features, out = l.out_features;
  const double* w = eff.data();
  double* dw = d_eff.data();
  double* dbias = l.has_bias ? d_eff.data() + in * out : nullptr;
  Tensor dx({batch, in});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xr = x.data() + b * in;
    const double* dyr = dy.data() + b * out;
    double* dxr = dx.data() + b * in;
    for (std::size_t o = 0; o < out; ++o) {
      const double g = dyr[o];
      if (dbias) dbias[o] += g;
      const double* wr = w + o * in;
      double* dwr = dw + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        dwr[i] += g * xr[i];
        dxr[i] += g * wr[i];
      }
    }
  }
  return dx;
}

Tensor conv_forward(const LayerSpec& l, const Tensor& x, const std::vector<double>& eff,
                    const std::vector<std::size_t>& out_shape) {
  const std::size_t batch = x.extent(0);
  const std::size_t ic = l.in_channels, oc = l.out_channels;
  const std::size_t h = x.extent(2), w = x.extent(3);
  const std::size_t oh = out_shape[1], ow = out_shape[2];
  const std::size_t kh = l.kernel_h, kw = l.kernel_w;
  const long long pad = static_cast<long long>(l.padding);
  const std::size_t stride = l.stride;
  const double* wts = eff.data();
  const double* bias = l.has_bias ? eff.data() + ic * oc * kh * kw : nullptr;
  Tensor y({batch, oc, oh, ow});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xb = x.data() + b * ic * h * w;
    for (std::size_t o = 0; o < oc; ++o) {
      double* yo = y.data() + (b * oc + o) * oh * ow;
      const double base = bias ? bias[o] : 0.0;
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = base;
          for (std::size_t c = 0; c < ic; ++c) {
            const double* xc = xb + c * h * w;
            const double* wc = wts + ((o * ic + c) * kh) * kw;
            for (std::size_t ky = 0; ky < kh; ++ky) {
              const long long iy =
                  static_cast<long long>(oy * stride + ky) - pad;
              if (iy < 0 || iy >= static_cast<long long>(h)) continue;
              for (std::size_t kx = 0; kx < kw; ++kx) {
                const long long ix =
                    static_cast<long long>(ox * stride + kx) - pad;
                if (ix < 0 || ix >= static_cast<long long>(w)) continue;
                acc += xc[iy * static_cast<long long>(w) + ix] * wc[ky * kw + kx];
              }
            }
          }
          yo[oy * ow + ox] = acc;
        }
      }
    }
  }
  return y;
}

Tensor conv_backward(const LayerSpec& l, const Tensor& x, const std::vector<double>& eff,
                     const Tensor& dy, std::vector<double>& d_eff) {
  const std::size_t batch = x.extent(0);
  const std::size_t ic = l.in_channels, oc = l.out_channels;
  const std::size_t h = x.extent(2), w = x.extent(3);
  const std::size_t oh = dy.extent(2), ow = dy.extent(3);
  const std::size_t kh = l.kernel_h, kw = l.kernel_w;
  const long long pad = static_cast<long long>(l.padding);
  const std::size_t stride = l.stride;
  const double* wts = eff.data();
  double* dwts = d_eff.data();
  double* dbias = l.has_bias ? d_eff.data() + ic * oc * kh * kw : nullptr;
  Tensor dx({batch, ic, h, w});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xb = x.data() + b * ic * h * w;
    double* dxb = dx.data() + b * ic * h * w;
    for (std::size_t o = 0; o < oc; ++o) {
      const double* dyo = dy.data() + (b * oc + o) * oh * ow;
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          const double g = dyo[oy * ow + ox];
          if (dbias) dbias[o] += g;
          for (std::size_t c = 0; c < ic; ++c) {
            const double* xc = xb + c * h * w;
            double* dxc = dxb + c * h * w;
            const double* wc = wts + ((o * ic + c) * kh) * kw;
            double* dwc = dwts + ((o * ic + c) * kh) * kw;
            for (std::size_t ky = 0; ky < kh; ++ky) {
              const long long iy =
                  static_cast<long long>(oy * stride + ky) - pad;
              if (iy < 0 || iy >= static_cast<long long>(h)) continue;
              for (std::size_t kx = 0; kx < kw; ++kx) {
                const long long ix =
                    static_cast<long long>(ox * stride + kx) - pad;
                if (ix < 0 || ix >= static_cast<long long>(w)) continue;
                const std::size_t xi =
                    static_cast<std::size_t>(iy * static_cast<long long>(w) + ix);
                dwc[ky * kw + kx] += g * xc[xi];
                dxc[xi] += g * wc[ky * kw + kx];
              }
            }
          }
        }
      }
    }
  }
  return dx;
}

Tensor run_forward(const Network& net, const SparsityMask& mask, const Batch& batch,
                   Trace* trace) {
  check_batch(net, batch);
  if (mask.size() != net.param_count()) {
    throw ConfigError("mask length " + std::to_string(mask.size()) +
                      " != parameter count " + std::to_string(net.param_count()));
  }
  const std::size_t bsz = batch.labels.size();
  Tensor cur = batch.inputs;
  if (trace) trace->acts.push_back(cur);
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& l = net.layers()[i];
    std::vector<double> eff;
    if (l.trainable()) eff = masked_params(net, mask, net.layer_range(i));
    switch (l.kind) {
      case LayerKind::FullyConnected:
        cur = fc_forward(l, cur, eff);
        break;
      case LayerKind::Conv2D:
        cur = conv_forward(l, cur, eff, net.layer_output_shape(i));
        break;
      case LayerKind::ReLU: {
        Tensor y = cur;
        for (auto& v : y.values()) v = v > 0.0 ? v : 0.0;
        cur = std::move(y);
        break;
      }
      case LayerKind::Flatten: {
        std::vector<std::size_t> shape = {bsz};
        shape.push_back(cur.numel() / bsz);
        cur = cur.reshaped(shape);
        break;
      }
    }
    if (trace) {
      trace->acts.push_back(cur);
      trace->eff.push_back(std::move(eff));
    }
  }
  return cur;
}

}  // namespace

Tensor forward(const Network& net, const SparsityMask& mask, const Batch& batch) {
  return run_forward(net, mask, batch, nullptr);
}

double cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
  const std::size_t batch = logits.extent(0);
  const std::size_t classes = logits.extent(1);
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const int label = labels[b];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw ConfigError("label " + std::to_string(label) + " outside [0, " +
                        std::to_string(classes) + ")");
    }
    const double* row = logits.data() + b * classes;
    double mx = row[0];
    for (std::size_t c = 1; c < classes; ++c) mx = std::max(mx, row[c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(row[c] - mx);
    total += std::log(sum) - (row[static_cast<std::size_t>(label)] - mx);
  }
  const double loss = total / static_cast<double>(batch);
  if (!std::isfinite(loss)) throw NumericError("non-finite cross-entropy loss");
  return loss;
}

std::size_t count_correct(const Tensor& logits, const std::vector<int>& labels) {
  const std::size_t batch = logits.extent(0);
  const std::size_t classes = logits.extent(1);
  std::size_t correct = 0;
  for (std::size_t b = 0; b < batch; ++b) {
    const double* row = logits.data() + b * classes;
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (row[c] > row[best]) best = c;
    }
    if (static_cast<long long>(best) == labels[b]) ++correct;
  }
  return correct;
}

BackwardResult loss_and_backward(Network& net, const SparsityMask& mask,
                                 const Batch& batch) {
  Trace trace;
  Tensor logits = run_forward(net, mask, batch, &trace);
  if (logits.rank() != 2) {
    throw ConfigError("loss expects [B, C] logits, got " +
                      Tensor::shape_string(logits.shape()));
  }
  const std::size_t bsz = logits.extent(0);
  const std::size_t classes = logits.extent(1);

  BackwardResult result;
  result.loss = cross_entropy(logits, batch.labels);
  result.correct = count_correct(logits, batch.labels);

  // d(loss)/d(logits) = (softmax - onehot) / B, with the same max-subtraction.
  Tensor grad_out({bsz, classes});
  for (std::size_t b = 0; b < bsz; ++b) {
    const double* row = logits.data() + b * classes;
    double* g = grad_out.data() + b * classes;
    double mx = row[0];
    for (std::size_t c = 1; c < classes; ++c) mx = std::max(mx, row[c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] = std::exp(row[c] - mx);
      sum += g[c];
    }
    const double inv = 1.0 / (sum * static_cast<double>(bsz));
    for (std::size_t c = 0; c < classes; ++c) g[c] *= inv;
    g[static_cast<std::size_t>(batch.labels[b])] -= 1.0 / static_cast<double>(bsz);
  }

  auto& grads = net.grads();
  std::fill(grads.begin(), grads.end(), 0.0);

  Tensor dcur = std::move(grad_out);
  for (std::size_t ri = net.layers().size(); ri-- > 0;) {
    const LayerSpec& l = net.layers()[ri];
    const Tensor& x = trace.acts[ri];
    switch (l.kind) {
      case LayerKind::FullyConnected:
      case LayerKind::Conv2D: {
        const auto range = net.layer_range(ri);
        std::vector<double> d_eff(range.count, 0.0);
        if (l.kind == LayerKind::FullyConnected) {
          dcur = fc_backward(l, x, trace.eff[ri], dcur, d_eff);
        } else {
          dcur = conv_backward(l, x, trace.eff[ri], dcur, d_eff);
        }
        // d(loss)/d(theta_i) = m_i * d(loss)/d(effective_i)
        for (std::size_t k = 0; k < range.count; ++k) {
          const std::size_t i = range.offset + k;
          grads[i] = mask.active(i) ? d_eff[k] : 0.0;
        }
        break;
      }
      case LayerKind::ReLU: {
        Tensor dx = dcur;
        for (std::size_t i = 0; i < dx.numel(); ++i) {
          if (x[i] <= 0.0) dx[i] = 0.0;
        }
        dcur = std::move(dx);
        break;
      }
      case LayerKind::Flatten:
        dcur = dcur.reshaped(x.shape());
        break;
    }
  }
  return result;
}

}  // namespace gradprune
