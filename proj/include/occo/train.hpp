// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occo/checkpoint.hpp"
#include "occo/dataset.hpp"
#include "occo/model.hpp"
#include "occo/optim.hpp"

namespace occo {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double lr0 = 1e-4;
  double lr_decay = 0.7;
  std::size_t lr_every = 10;
  AdamConfig adam;
  std::uint64_t seed = 0;
  // Stop after this many global steps (counted from step 0), if set.
  std::optional<std::uint64_t> max_steps;
};

void validate(const TrainConfig& config);

double lr_schedule(std::size_t epoch, const TrainConfig& config) noexcept;

// Identifies everything that shapes the optimisation trajectory: batch size,
// learning-rate and Adam settings, seed and dataset size. Epoch count and
// max_steps only decide where to stop and are left out.
std::uint64_t config_hash(const TrainConfig& config, std::size_t dataset_size);

struct StepRecord {
  std::uint64_t step = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double alpha = 0.0;
  double cd_coarse = 0.0;
  double cd_fine = 0.0;
  double loss = 0.0;
  double ms = 0.0;
};

using TrainLog = std::vector<StepRecord>;

// CSV with header step,epoch,lr,alpha,cd_coarse,cd_fine,loss,ms.
std::string log_csv(std::span<const StepRecord> log);

struct TrainResult {
  ModelParams params;
  TrainState state;
  TrainLog log;
};

using StepHook = std::function<void(const StepRecord&, const ModelParams&)>;

std::size_t steps_per_epoch(std::size_t dataset_size, std::size_t batch_size) noexcept;

// Sample order of one epoch, from the per-epoch derived seed.
std::vector<std::size_t> epoch_order(std::size_t dataset_size, std::size_t epoch, std::uint64_t seed);

/// Adam on the completion loss; alpha follows the global step and the
/// learning rate the epoch. Per-sample gradients are computed in parallel and
/// summed in batch order. NonFiniteLoss names the failing step.
TrainResult pretrain(std::span<const CompletionSample> dataset, const ModelDims& dims, const TrainConfig& config,
                     const StepHook& on_step = {});

// Continues from a checkpoint with train state. ConfigMismatch when the
// config hash differs, DimsMismatch when the file has no train state.
TrainResult resume(const Checkpoint& checkpoint, std::span<const CompletionSample> dataset, const TrainConfig& config,
                   const StepHook& on_step = {});

// Mean completion loss over a dataset at a fixed alpha.
double dataset_loss(std::span<const CompletionSample> dataset, const ModelParams& params, double alpha);

struct DatasetChamfer {
  double cd_coarse = 0.0;
  double cd_fine = 0.0;
};
DatasetChamfer dataset_chamfer(std::span<const CompletionSample> dataset, const ModelParams& params);

}  // namespace occo
