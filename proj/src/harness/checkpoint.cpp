// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "gradprune/errors.hpp"

namespace gradprune {

namespace {

constexpr char kMagic[4] = {'G', 'P', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
 public:
  explicit ByteWriter(std::string* out) : out_(out) {}

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_->push_back(char((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_->push_back(char((v >> (8 * i)) & 0xff));
  }
  void i64(std::int64_t v) { u64(std::uint64_t(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const void* p, std::size_t n) {
    out_->append(static_cast<const char*>(p), n);
  }

 private:
  std::string* out_;
};

class ByteReader {
 public:
  ByteReader(const std::string& buf, const std::string& path)
      : buf_(buf), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(buf_[off_ + i])) << (8 * i);
    off_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf_[off_ + i])) << (8 * i);
    off_ += 8;
    return v;
  }
  std::int64_t i64() { return std::int64_t(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + off_, n);
    off_ += n;
  }
  std::size_t offset() const { return off_; }
  void done() {
    if (off_ != buf_.size()) {
      throw FormatError(path_ + ": " + std::to_string(buf_.size() - off_) +
                        " trailing bytes at offset " + std::to_string(off_));
    }
  }

 private:
  void need(std::size_t n) {
    if (off_ + n > buf_.size()) {
      throw FormatError(path_ + ": truncated at byte " + std::to_string(off_) +
                        ", expected " + std::to_string(n) + " more bytes");
    }
  }
  const std::string& buf_;
  std::string path_;
  std::size_t off_ = 0;
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  if (ck.velocity.size() != ck.params.size() || ck.mask.size() != ck.params.size()) {
    throw ConfigError("checkpoint: params, velocity and mask lengths differ");
  }
  std::string buf;
  ByteWriter w(&buf);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u64(ck.model.size());
  w.bytes(ck.model.data(), ck.model.size());
  w.u32(std::uint32_t(ck.input_shape.size()));
  for (std::size_t d : ck.input_shape) w.u64(d);
  w.i64(ck.iter);
  w.u64(ck.epoch);
  w.f64(ck.lr);
  w.f64(ck.momentum);
  w.f64(ck.weight_decay);
  w.f64(ck.lr_decay_factor);
  w.u64(ck.decay_cursor);
  w.u64(ck.lr_decay_epochs.size());
  for (std::size_t e : ck.lr_decay_epochs) w.u64(e);
  const std::size_t n = ck.params.size();
  w.u64(n);
  for (double v : ck.params) w.f64(v);
  for (double v : ck.velocity) w.f64(v);
  std::vector<std::uint8_t> packed((n + 7) / 8, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ck.mask[i]) packed[i / 8] |= std::uint8_t(1u << (i % 8));
  }
  if (!packed.empty()) w.bytes(packed.data(), packed.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write checkpoint file " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw FormatError("write failed for checkpoint file " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint file " + path);
  std::string buf{std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>()};
  ByteReader r(buf, path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path + ": bad magic at byte 0");
  }
  std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError(path + ": unsupported version " + std::to_string(version));
  }
  Checkpoint ck;
  std::size_t model_len = r.u64();
  ck.model.resize(model_len);
  if (model_len) r.bytes(ck.model.data(), model_len);
  std::uint32_t ndims = r.u32();
  ck.input_shape.resize(ndims);
  for (std::uint32_t d = 0; d < ndims; ++d) ck.input_shape[d] = r.u64();
  ck.iter = r.i64();
  ck.epoch = r.u64();
  ck.lr = r.f64();
  ck.momentum = r.f64();
  ck.weight_decay = r.f64();
  ck.lr_decay_factor = r.f64();
  ck.decay_cursor = r.u64();
  std::size_t n_decay = r.u64();
  ck.lr_decay_epochs.resize(n_decay);
  for (std::size_t i = 0; i < n_decay; ++i) ck.lr_decay_epochs[i] = r.u64();
  std::size_t n = r.u64();
  ck.params.resize(n);
  for (std::size_t i = 0; i < n; ++i) ck.params[i] = r.f64();
  ck.velocity.resize(n);
  for (std::size_t i = 0; i < n; ++i) ck.velocity[i] = r.f64();
  std::vector<std::uint8_t> packed((n + 7) / 8);
  if (!packed.empty()) r.bytes(packed.data(), packed.size());
  ck.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ck.mask[i] = (packed[i / 8] >> (i % 8)) & 1u;
  }
  r.done();
  return ck;
}

}  // namespace gradprune
