// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "occo/cloud.hpp"
#include "occo/losses.hpp"
#include "occo/seed.hpp"

namespace occo {

struct ModelDims {
  std::vector<int> point_mlp_widths{64, 128, 256};
  int embed_dim = 128;
  std::vector<int> coarse_hidden{256, 256};
  int n_coarse = 64;
  int grid_side = 4;
  std::vector<int> fold_mlp_widths{64, 64};

  // 1024-d embedding, 1024 coarse points, 4x4 folding grid (16384 fine points).
  static ModelDims full();

  int fine_count() const noexcept { return n_coarse * grid_side * grid_side; }
  int fold_input_dim() const noexcept { return embed_dim + 5; }

  bool encoder_compatible(const ModelDims& other) const noexcept {
    return point_mlp_widths == other.point_mlp_widths && embed_dim == other.embed_dim;
  }
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

void validate(const ModelDims& dims);

// Affine layer y = W x + b with W stored out x in.
struct Dense {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  Eigen::Index fan_in() const noexcept { return weight.cols(); }
  Eigen::Index fan_out() const noexcept { return weight.rows(); }
};

/// All weights of the completion model. Encoder: shared per-point ReLU MLP
/// followed by a linear layer to embed_dim and a max-pool. Coarse decoder:
/// ReLU MLP to a linear 3 * n_coarse output. Folding decoder: ReLU MLP over
/// [embedding, coarse point, grid offset] to a linear 3-d displacement.
struct ModelParams {
  ModelDims dims;
  std::vector<Dense> encoder;
  std::vector<Dense> coarse;
  std::vector<Dense> folding;

  // Layers in declared (serialization) order: encoder, coarse, folding.
  std::vector<Dense*> layers();
  std::vector<const Dense*> layers() const;

  std::size_t parameter_count() const;
  std::size_t encoder_parameter_count() const;

  // Weight rows (row-major) then bias, layer after layer.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);

  // Same shapes, all zeros.
  ModelParams zeros_like() const;
};

// All-zero parameters of the right shapes.
ModelParams zero_params(const ModelDims& dims);
ModelParams init_params(const ModelDims& dims, Rng& rng);

struct Embedding {
  Eigen::VectorXd values;
  std::optional<std::uint32_t> source_id;
};

struct ForwardCache {
  ModelDims dims;
  std::size_t n_points = 0;
  Eigen::MatrixXd input;                     // 3 x n
  std::vector<Eigen::MatrixXd> encoder_pre;  // per encoder layer, width x n
  std::vector<Eigen::MatrixXd> encoder_out;  // post-activation (last layer linear)
  std::vector<Eigen::Index> argmax;          // per embedding channel, winning point
  Eigen::VectorXd embedding;

  std::vector<Eigen::VectorXd> coarse_pre;
  std::vector<Eigen::VectorXd> coarse_out;
  Eigen::MatrixXd coarse;  // 3 x n_coarse

  Eigen::MatrixXd fold_coarse;  // 3 x n_fine, coarse point feeding each fine point
  Eigen::MatrixXd fold_grid;    // 2 x n_fine
  std::vector<Eigen::MatrixXd> fold_pre;
  std::vector<Eigen::MatrixXd> fold_out;
  Eigen::MatrixXd fine;  // 3 x n_fine

  bool decoded = false;

  // Per-point activations of the hidden encoder layers (the dissection
  // channels), grouped by layer.
  const std::vector<Eigen::MatrixXd>& point_features() const noexcept { return encoder_out; }
};

// Grid offsets: linspace(-0.05, 0.05, side) on both axes, first axis outer.
Eigen::MatrixXd folding_grid(int side);

std::pair<Embedding, ForwardCache> encoder_forward(const PointCloud& cloud, const ModelParams& params);

struct Decoded {
  PointCloud coarse;
  PointCloud fine;
};

// Decodes an embedding. When `cache` is given it is filled for backward().
Decoded decode(const Embedding& embedding, const ModelParams& params, ForwardCache* cache = nullptr);

// Encoder + decoder in one pass; returns the populated cache.
ForwardCache forward(const PointCloud& cloud, const ModelParams& params);

struct CompletionSample;

struct BackwardResult {
  CompletionLoss loss;
  ModelParams grads;
};

/// Exact gradient of CD(coarse) + alpha * CD(fine) w.r.t. every parameter.
/// Throws StaleCache when the cache does not match params/sample shapes.
BackwardResult backward_weighted(const CompletionSample& sample, const ModelParams& params, const ForwardCache& cache,
                                 double alpha);
BackwardResult backward(const CompletionSample& sample, const ModelParams& params, const ForwardCache& cache,
                        std::uint64_t step);

// Loss only (no gradient), forward included.
CompletionLoss evaluate(const CompletionSample& sample, const ModelParams& params, double alpha);

// Encoder-only parameters, as loaded into a downstream probe.
struct EncoderParams {
  ModelDims dims;
  std::vector<Dense> encoder;
};

EncoderParams encoder_of(const ModelParams& params);

// Embedding through encoder-only parameters; matches encoder_forward.
Eigen::VectorXd embed(const PointCloud& cloud, const EncoderParams& encoder);
ForwardCache encode_with(const PointCloud& cloud, const EncoderParams& encoder);

}  // namespace occo
