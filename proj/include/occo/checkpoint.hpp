// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "occo/model.hpp"
#include "occo/optim.hpp"

namespace occo {

struct TrainState {
  std::uint64_t global_step = 0;
  std::uint64_t config_hash = 0;
  AdamState adam;
};

struct Checkpoint {
  ModelParams params;  // decoder stacks empty for encoder-only files
  bool has_decoder = false;
  std::optional<TrainState> train;
};

// "OCWT", u16 version, u16 flags (bit 0 decoder present, bit 1 train state
// present), dims block of u32, then f64 tensors (weight rows, then bias) in
// layer order, then the optional train state. Little-endian throughout.
inline constexpr std::uint16_t kCheckpointVersion = 1;

std::vector<char> encode_checkpoint(const ModelParams& params, bool with_decoder,
                                    const std::optional<TrainState>& train = std::nullopt);
// Any structural defect (magic, version, truncation, shape) is DimsMismatch.
Checkpoint decode_checkpoint(std::span<const char> bytes);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const std::optional<TrainState>& train = std::nullopt);
Checkpoint load_checkpoint(const std::filesystem::path& path);
// Full model; DimsMismatch for encoder-only files.
ModelParams load_model(const std::filesystem::path& path);

void save_encoder(const ModelParams& params, const std::filesystem::path& path);
// Reads the encoder block of any OCWT file.
EncoderParams load_encoder(const std::filesystem::path& path);
// Same, refusing weights whose encoder dims differ from `expected`.
EncoderParams load_encoder(const std::filesystem::path& path, const ModelDims& expected);

}  // namespace occo
