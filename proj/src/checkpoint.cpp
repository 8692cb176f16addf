// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "occo/error.hpp"
#include "occo/io.hpp"

namespace occo {
namespace {

constexpr std::uint16_t kFlagDecoder = 1;
constexpr std::uint16_t kFlagTrain = 2;
constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1u << 20;

class Writer {
 public:
  void uint(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v), 8); }
  void widths(const std::vector<int>& w) {
    uint(w.size(), 4);
    for (int x : w) uint(static_cast<std::uint32_t>(x), 4);
  }
  void dense(const Dense& d) {
    for (Eigen::Index r = 0; r < d.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < d.weight.cols(); ++c) f64(d.weight(r, c));
    for (Eigen::Index r = 0; r < d.bias.size(); ++r) f64(d.bias(r));
  }
  std::vector<char> out;
};

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(uint(8)); }
  int width() {
    const auto w = uint(4);
    if (w < 1 || w > kMaxWidth) fail(ErrorCode::DimsMismatch, "checkpoint width out of range");
    return static_cast<int>(w);
  }
  std::vector<int> widths() {
    const auto n = uint(4);
    if (n > kMaxLayers) fail(ErrorCode::DimsMismatch, "checkpoint layer count out of range");
    std::vector<int> w;
    for (std::uint64_t i = 0; i < n; ++i) w.push_back(width());
    return w;
  }
  void dense(Dense& d) {
    need(static_cast<std::size_t>(d.weight.size() + d.bias.size()) * 8);
    for (Eigen::Index r = 0; r < d.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < d.weight.cols(); ++c) d.weight(r, c) = f64();
    for (Eigen::Index r = 0; r < d.bias.size(); ++r) d.bias(r) = f64();
  }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail(ErrorCode::DimsMismatch, "checkpoint is truncated");
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<char> encode_checkpoint(const ModelParams& params, bool with_decoder,
                                    const std::optional<TrainState>& train) {
  Writer w;
  w.out = {'O', 'C', 'W', 'T'};
  w.uint(kCheckpointVersion, 2);
  const std::uint16_t flags = (with_decoder ? kFlagDecoder : 0) | (train ? kFlagTrain : 0);
  w.uint(flags, 2);
  const ModelDims& d = params.dims;
  w.widths(d.point_mlp_widths);
  w.uint(static_cast<std::uint32_t>(d.embed_dim), 4);
  w.widths(d.coarse_hidden);
  w.uint(static_cast<std::uint32_t>(d.n_coarse), 4);
  w.uint(static_cast<std::uint32_t>(d.grid_side), 4);
  w.widths(d.fold_mlp_widths);
  for (const Dense& l : params.encoder) w.dense(l);
  if (with_decoder) {
    for (const Dense& l : params.coarse) w.dense(l);
    for (const Dense& l : params.folding) w.dense(l);
  }
  if (train) {
    w.uint(train->global_step, 8);
    w.uint(train->config_hash, 8);
    w.uint(train->adam.step, 8);
    w.uint(train->adam.m.size(), 8);
    for (double x : train->adam.m) w.f64(x);
    for (double x : train->adam.v) w.f64(x);
  }
  return std::move(w.out);
}

Checkpoint decode_checkpoint(std::span<const char> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "OCWT", 4) != 0)
    fail(ErrorCode::DimsMismatch, "not an OCWT checkpoint");
  Reader r(bytes.subspan(4));
  if (r.uint(2) != kCheckpointVersion) fail(ErrorCode::DimsMismatch, "unsupported checkpoint version");
  const auto flags = r.uint(2);
  if (flags & ~std::uint64_t{kFlagDecoder | kFlagTrain}) fail(ErrorCode::DimsMismatch, "unknown checkpoint flags");
  ModelDims d;
  d.point_mlp_widths = r.widths();
  d.embed_dim = r.width();
  d.coarse_hidden = r.widths();
  d.n_coarse = r.width();
  d.grid_side = r.width();
  d.fold_mlp_widths = r.widths();

  Checkpoint ck;
  ck.has_decoder = flags & kFlagDecoder;
  ck.params = zero_params(d);
  if (!ck.has_decoder) {
    ck.params.coarse.clear();
    ck.params.folding.clear();
  }
  for (Dense& l : ck.params.encoder) r.dense(l);
  for (Dense& l : ck.params.coarse) r.dense(l);
  for (Dense& l : ck.params.folding) r.dense(l);
  if (flags & kFlagTrain) {
    TrainState t;
    t.global_step = r.uint(8);
    t.config_hash = r.uint(8);
    t.adam.step = r.uint(8);
    const auto n = r.uint(8);
    if (!ck.has_decoder || n != ck.params.parameter_count())
      fail(ErrorCode::DimsMismatch, "optimizer state does not match the parameters");
    r.need(static_cast<std::size_t>(n) * 16);
    t.adam.m.resize(n);
    t.adam.v.resize(n);
    for (auto& x : t.adam.m) x = r.f64();
    for (auto& x : t.adam.v) x = r.f64();
    ck.train = std::move(t);
  }
  if (!r.done()) fail(ErrorCode::DimsMismatch, "trailing bytes in checkpoint");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const std::optional<TrainState>& train) {
  const auto bytes = encode_checkpoint(params, true, train);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::IoError, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_binary_file(path)); }

ModelParams load_model(const std::filesystem::path& path) {
  Checkpoint ck = load_checkpoint(path);
  if (!ck.has_decoder) fail(ErrorCode::DimsMismatch, "checkpoint holds only encoder weights");
  return std::move(ck.params);
}

void save_encoder(const ModelParams& params, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(params, false);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot write " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::IoError, "write failed for " + path.string());
}

EncoderParams load_encoder(const std::filesystem::path& path) { return encoder_of(load_checkpoint(path).params); }

EncoderParams load_encoder(const std::filesystem::path& path, const ModelDims& expected) {
  EncoderParams e = load_encoder(path);
  if (!e.dims.encoder_compatible(expected))
    fail(ErrorCode::DimsMismatch, "encoder dims in checkpoint differ from the requested model");
  return e;
}

}  // namespace occo
