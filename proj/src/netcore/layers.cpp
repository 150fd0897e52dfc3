// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/netcore/layers.hpp"

#include <cctype>
#include <sstream>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/tensor.hpp"

namespace gradprune {

LayerSpec LayerSpec::fully_connected(std::size_t in, std::size_t out, bool bias) {
  LayerSpec l;
  l.kind = LayerKind::FullyConnected;
  l.in_features = in;
  l.out_features = out;
  l.has_bias = bias;
  if (in == 0 || out == 0) throw ConfigError("fully_connected: features must be >= 1");
  return l;
}

LayerSpec LayerSpec::conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kh,
                            std::size_t kw, std::size_t stride, std::size_t padding,
                            bool bias) {
  LayerSpec l;
  l.kind = LayerKind::Conv2D;
  l.in_channels = in_ch;
  l.out_channels = out_ch;
  l.kernel_h = kh;
  l.kernel_w = kw;
  l.stride = stride;
  l.padding = padding;
  l.has_bias = bias;
  if (in_ch == 0 || out_ch == 0 || kh == 0 || kw == 0 || stride == 0) {
    throw ConfigError("conv2d: channels, kernel extents and stride must be >= 1");
  }
  return l;
}

LayerSpec LayerSpec::relu() {
  LayerSpec l;
  l.kind = LayerKind::ReLU;
  return l;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec l;
  l.kind = LayerKind::Flatten;
  return l;
}

std::size_t LayerSpec::weight_count() const {
  switch (kind) {
    case LayerKind::FullyConnected:
      return in_features * out_features;
    case LayerKind::Conv2D:
      return in_channels * out_channels * kernel_h * kernel_w;
    default:
      return 0;
  }
}

std::size_t LayerSpec::bias_count() const {
  if (!has_bias) return 0;
  switch (kind) {
    case LayerKind::FullyConnected:
      return out_features;
    case LayerKind::Conv2D:
      return out_channels;
    default:
      return 0;
  }
}

std::size_t LayerSpec::fan_in() const {
  switch (kind) {
    case LayerKind::FullyConnected:
      return in_features;
    case LayerKind::Conv2D:
      return in_channels * kernel_h * kernel_w;
    default:
      return 0;
  }
}

std::vector<std::size_t> LayerSpec::output_shape(const std::vector<std::size_t>& in,
                                                 std::size_t layer_index) const {
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError("layer " + std::to_string(layer_index) + " (" + describe() +
                      "): " + msg + ", input " + Tensor::shape_string(in));
  };
  switch (kind) {
    case LayerKind::FullyConnected: {
      if (in.size() != 1 || in[0] != in_features) {
        fail("expects a flat input of " + std::to_string(in_features) + " features");
      }
      return {out_features};
    }
    case LayerKind::Conv2D: {
      if (in.size() != 3 || in[0] != in_channels) {
        fail("expects input [" + std::to_string(in_channels) + ",H,W]");
      }
      const std::size_t h = in[1] + 2 * padding;
      const std::size_t w = in[2] + 2 * padding;
      if (h < kernel_h || w < kernel_w) fail("kernel larger than padded input");
      return {out_channels, (h - kernel_h) / stride + 1, (w - kernel_w) / stride + 1};
    }
    case LayerKind::ReLU:
      return in;
    case LayerKind::Flatten: {
      std::size_t n = 1;
      for (std::size_t e : in) n *= e;
      if (in.empty()) fail("empty input shape");
      return {n};
    }
  }
  fail("unknown layer kind");
  return {};
}

std::string LayerSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case LayerKind::FullyConnected:
      os << "fc(" << in_features << "->" << out_features << (has_bias ? ",b" : "") << ")";
      break;
    case LayerKind::Conv2D:
      os << "conv(" << in_channels << "->" << out_channels << "," << kernel_h << "x"
         << kernel_w << ",s" << stride << ",p" << padding << (has_bias ? ",b" : "")
         << ")";
      break;
    case LayerKind::ReLU:
      os << "relu";
      break;
    case LayerKind::Flatten:
      os << "flatten";
      break;
  }
  return os.str();
}

std::string format_layer_list(const std::vector<LayerSpec>& layers) {
  std::string out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) out += ",";
    out += layers[i].describe();
  }
  return out;
}

namespace {

// Splits "a(b,c),d" at top-level commas.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  try {
    long long v = std::stoll(s);
    if (v < 0) throw std::out_of_range("negative");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("layer list: bad " + what + " '" + s + "'");
  }
}

}  // namespace

std::vector<LayerSpec> parse_layer_list(const std::string& text) {
  std::vector<LayerSpec> layers;
  for (const std::string& raw : split_top_level(text)) {
    std::string item;
    for (char c : raw) {
      if (!std::isspace(static_cast<unsigned char>(c))) item += c;
    }
    if (item.empty()) continue;
    if (item == "relu") {
      layers.push_back(LayerSpec::relu());
      continue;
    }
    if (item == "flatten") {
      layers.push_back(LayerSpec::flatten());
      continue;
    }
    auto open = item.find('(');
    if (open == std::string::npos || item.back() != ')') {
      throw ConfigError("layer list: cannot parse '" + item + "'");
    }
    const std::string head = item.substr(0, open);
    const std::string body = item.substr(open + 1, item.size() - open - 2);
    std::vector<std::string> args;
    {
      std::stringstream ss(body);
      std::string a;
      while (std::getline(ss, a, ',')) args.push_back(a);
    }
    bool bias = !args.empty() && args.back() == "b";
    if (bias) args.pop_back();
    if (head == "fc") {
      // fc(in->out[,b])
      if (args.size() != 1) throw ConfigError("layer list: fc expects in->out");
      auto arrow = args[0].find("->");
      if (arrow == std::string::npos) throw ConfigError("layer list: fc expects in->out");
      layers.push_back(LayerSpec::fully_connected(
          parse_count(args[0].substr(0, arrow), "fc in_features"),
          parse_count(args[0].substr(arrow + 2), "fc out_features"), bias));
    } else if (head == "conv") {
      // conv(in->out,KhxKw,sS,pP[,b])
      if (args.size() != 4) throw ConfigError("layer list: conv expects in->out,KxK,sS,pP");
      auto arrow = args[0].find("->");
      auto x = args[1].find('x');
      if (arrow == std::string::npos || x == std::string::npos ||
          args[2].empty() || args[2][0] != 's' || args[3].empty() || args[3][0] != 'p') {
        throw ConfigError("layer list: cannot parse conv '" + item + "'");
      }
      layers.push_back(LayerSpec::conv2d(
          parse_count(args[0].substr(0, arrow), "conv in_channels"),
          parse_count(args[0].substr(arrow + 2), "conv out_channels"),
          parse_count(args[1].substr(0, x), "conv kernel_h"),
          parse_count(args[1].substr(x + 1), "conv kernel_w"),
          parse_count(args[2].substr(1), "conv stride"),
          parse_count(args[3].substr(1), "conv padding"), bias));
    } else {
      throw ConfigError("layer list: unknown layer '" + head + "'");
    }
  }
  if (layers.empty()) throw ConfigError("layer list: empty");
  return layers;
}

}  // namespace gradprune
