// Copyright 2026 The gradprune Authors
// Licensed under the Apache License, Version 2.0

#include "gradprune/harness/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include "gradprune/errors.hpp"
#include "gradprune/netcore/rng.hpp"
#include "gradprune/prune/schedule.hpp"

namespace gradprune {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<unsigned char> buf{std::istreambuf_iterator<char>(in),
                                 std::istreambuf_iterator<char>()};
  return buf;
}

std::uint32_t be_u32(const std::vector<unsigned char>& buf, std::size_t off,
                     const std::string& path) {
  if (off + 4 > buf.size()) {
    throw FormatError(path + ": truncated at byte " + std::to_string(off) +
                      ", expected 4 more bytes");
  }
  return (std::uint32_t(buf[off]) << 24) | (std::uint32_t(buf[off + 1]) << 16) |
         (std::uint32_t(buf[off + 2]) << 8) | std::uint32_t(buf[off + 3]);
}

/// Parses an IDX header of ubyte type, returning the dimension list and the
/// payload offset.
std::vector<std::size_t> idx_header(const std::vector<unsigned char>& buf,
                                    const std::string& path,
                                    std::size_t expect_ndims,
                                    std::size_t* payload_off) {
  std::uint32_t magic = be_u32(buf, 0, path);
  if ((magic >> 8) != 0x08) {
    throw FormatError(path + ": bad magic at byte 0, expected ubyte IDX");
  }
  std::size_t ndims = magic & 0xff;
  if (ndims != expect_ndims) {
    throw FormatError(path + ": expected " + std::to_string(expect_ndims) +
                      " dimensions, file declares " + std::to_string(ndims) +
                      " at byte 3");
  }
  std::vector<std::size_t> dims(ndims);
  for (std::size_t d = 0; d < ndims; ++d) {
    dims[d] = be_u32(buf, 4 + 4 * d, path);
  }
  *payload_off = 4 + 4 * ndims;
  std::size_t need = 1;
  for (std::size_t d : dims) need *= d;
  if (*payload_off + need > buf.size()) {
    throw FormatError(path + ": truncated at byte " + std::to_string(buf.size()) +
                      ", header promises " + std::to_string(*payload_off + need) +
                      " bytes");
  }
  return dims;
}

}  // namespace

std::vector<std::size_t> Dataset::sample_shape() const {
  const auto& s = images.shape();
  return {s[1], s[2], s[3]};
}

int Dataset::max_label() const {
  int m = -1;
  for (int l : labels) m = std::max(m, l);
  return m;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  auto ibuf = read_file(images_path);
  std::size_t ioff = 0;
  auto idims = idx_header(ibuf, images_path, 3, &ioff);
  auto lbuf = read_file(labels_path);
  std::size_t loff = 0;
  auto ldims = idx_header(lbuf, labels_path, 1, &loff);
  if (idims[0] != ldims[0]) {
    throw FormatError("image count " + std::to_string(idims[0]) + " in " +
                      images_path + " does not match label count " +
                      std::to_string(ldims[0]) + " in " + labels_path);
  }
  std::size_t n = idims[0], h = idims[1], w = idims[2];
  Dataset ds;
  ds.images = Tensor({n, 1, h, w});
  for (std::size_t i = 0; i < n * h * w; ++i) {
    ds.images.data()[i] = double(ibuf[ioff + i]) / 255.0;
  }
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) ds.labels[i] = int(lbuf[loff + i]);
  return ds;
}

void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path) {
  const auto& s = ds.images.shape();
  if (s[1] != 1) {
    throw ConfigError("IDX image files hold one channel, dataset has " +
                      std::to_string(s[1]));
  }
  std::size_t n = s[0], h = s[2], w = s[3];
  auto put_u32 = [](std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v >> 24), (unsigned char)(v >> 16),
                          (unsigned char)(v >> 8), (unsigned char)v};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  std::ofstream iout(images_path, std::ios::binary);
  if (!iout) throw FormatError("cannot write " + images_path);
  put_u32(iout, 0x00000803);
  put_u32(iout, std::uint32_t(n));
  put_u32(iout, std::uint32_t(h));
  put_u32(iout, std::uint32_t(w));
  for (std::size_t i = 0; i < n * h * w; ++i) {
    double x = std::clamp(ds.images.data()[i], 0.0, 1.0);
    unsigned char b = (unsigned char)round_half_up(x * 255.0);
    iout.write(reinterpret_cast<const char*>(&b), 1);
  }
  std::ofstream lout(labels_path, std::ios::binary);
  if (!lout) throw FormatError("cannot write " + labels_path);
  put_u32(lout, 0x00000801);
  put_u32(lout, std::uint32_t(n));
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char b = (unsigned char)ds.labels[i];
    lout.write(reinterpret_cast<const char*>(&b), 1);
  }
}

Dataset load_cifar10_bin(const std::vector<std::string>& paths) {
  constexpr std::size_t kRecord = 1 + 3 * 32 * 32;
  std::vector<unsigned char> all;
  for (const auto& path : paths) {
    auto buf = read_file(path);
    if (buf.size() % kRecord != 0) {
      throw FormatError(path + ": size " + std::to_string(buf.size()) +
                        " is not a multiple of the " + std::to_string(kRecord) +
                        "-byte record");
    }
    all.insert(all.end(), buf.begin(), buf.end());
  }
  std::size_t n = all.size() / kRecord;
  Dataset ds;
  ds.images = Tensor({n, 3, 32, 32});
  ds.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const unsigned char* rec = all.data() + r * kRecord;
    if (rec[0] > 9) {
      throw FormatError("label " + std::to_string(int(rec[0])) +
                        " out of range at record " + std::to_string(r));
    }
    ds.labels[r] = int(rec[0]);
    double* dst = ds.images.data() + r * 3 * 32 * 32;
    for (std::size_t i = 0; i < 3 * 32 * 32; ++i) {
      dst[i] = double(rec[1 + i]) / 255.0;
    }
  }
  return ds;
}

Dataset synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_classes < 2) throw ConfigError("synthetic dataset needs >= 2 classes");
  if (spec.samples_per_class == 0) throw ConfigError("samples_per_class must be > 0");
  if (spec.input_shape.size() != 3) throw ConfigError("input_shape must be {C, H, W}");
  if (spec.margin <= 0.0) throw ConfigError("margin must be > 0");
  std::size_t dim = spec.input_shape[0] * spec.input_shape[1] * spec.input_shape[2];

  // Class means are i.i.d. uniform around mid-gray. Two random means sit an
  // expected sqrt(dim * 2/3) * spread apart, so this sigma puts a pair of
  // classes `margin` sigmas apart along the line joining them.
  constexpr double kSpread = 0.15;
  double sigma = kSpread * std::sqrt(2.0 * double(dim) / 3.0) / (2.0 * spec.margin);

  std::mt19937_64 rng(seed);
  std::vector<double> means(spec.num_classes * dim);
  for (double& m : means) m = uniform_real(rng, 0.5 - kSpread, 0.5 + kSpread);

  std::size_t n = spec.num_classes * spec.samples_per_class;
  Dataset ds;
  ds.images = Tensor({n, spec.input_shape[0], spec.input_shape[1], spec.input_shape[2]});
  ds.labels.resize(n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s, ++row) {
      double* dst = ds.images.data() + row * dim;
      const double* mu = means.data() + c * dim;
      for (std::size_t i = 0; i < dim; ++i) {
        dst[i] = std::clamp(mu[i] + sigma * normal(rng), 0.0, 1.0);
      }
      ds.labels[row] = int(c);
    }
  }
  return ds;
}

}  // namespace gradprune
