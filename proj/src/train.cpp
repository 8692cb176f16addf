// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/train.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "occo/error.hpp"
#include "occo/seed.hpp"

namespace occo {
namespace {

std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v + 0x9e3779b97f4a7c15ULL)); }
std::uint64_t fold(std::uint64_t h, double v) { return fold(h, std::bit_cast<std::uint64_t>(v)); }

void add_into(ModelParams& acc, const ModelParams& g) {
  for (std::size_t l = 0; l < acc.encoder.size(); ++l) {
    acc.encoder[l].weight += g.encoder[l].weight;
    acc.encoder[l].bias += g.encoder[l].bias;
  }
  for (std::size_t l = 0; l < acc.coarse.size(); ++l) {
    acc.coarse[l].weight += g.coarse[l].weight;
    acc.coarse[l].bias += g.coarse[l].bias;
  }
  for (std::size_t l = 0; l < acc.folding.size(); ++l) {
    acc.folding[l].weight += g.folding[l].weight;
    acc.folding[l].bias += g.folding[l].bias;
  }
}

void scale(ModelParams& p, double s) {
  for (Dense* d : p.layers()) {
    d->weight *= s;
    d->bias *= s;
  }
}

bool all_finite(const ModelParams& p) {
  for (const Dense* d : p.layers())
    if (!d->weight.allFinite() || !d->bias.allFinite()) return false;
  return true;
}

TrainResult run(ModelParams params, TrainState state, std::span<const CompletionSample> dataset,
                const TrainConfig& config, const StepHook& on_step) {
  const std::size_t n = dataset.size();
  const std::size_t spe = steps_per_epoch(n, config.batch_size);
  std::uint64_t total = static_cast<std::uint64_t>(spe) * config.epochs;
  if (config.max_steps) total = std::min(total, *config.max_steps);

  TrainResult result;
  std::vector<std::size_t> order;
  std::size_t order_epoch = static_cast<std::size_t>(-1);
  for (std::uint64_t step = state.global_step; step < total; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t epoch = static_cast<std::size_t>(step / spe);
    const std::size_t batch = static_cast<std::size_t>(step % spe);
    if (epoch != order_epoch) {
      order = epoch_order(n, epoch, config.seed);
      order_epoch = epoch;
    }
    const std::size_t begin = batch * config.batch_size;
    const std::size_t end = std::min(n, begin + config.batch_size);
    const double alpha = alpha_schedule(step);
    const double lr = lr_schedule(epoch, config);

    std::vector<BackwardResult> per_sample(end - begin);
    const auto count = static_cast<std::ptrdiff_t>(end - begin);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const CompletionSample& s = dataset[order[begin + static_cast<std::size_t>(i)]];
      const ForwardCache cache = forward(s.occluded, params);
      per_sample[static_cast<std::size_t>(i)] = backward_weighted(s, params, cache, alpha);
    }

    StepRecord rec{step, epoch, lr, alpha, 0.0, 0.0, 0.0, 0.0};
    ModelParams grads = std::move(per_sample[0].grads);
    for (std::size_t i = 0; i < per_sample.size(); ++i) {
      if (i > 0) add_into(grads, per_sample[i].grads);
      rec.cd_coarse += per_sample[i].loss.cd_coarse;
      rec.cd_fine += per_sample[i].loss.cd_fine;
      rec.loss += per_sample[i].loss.value;
    }
    const double inv = 1.0 / static_cast<double>(per_sample.size());
    scale(grads, inv);
    rec.cd_coarse *= inv;
    rec.cd_fine *= inv;
    rec.loss *= inv;
    if (!std::isfinite(rec.loss) || !all_finite(grads))
      fail(ErrorCode::NonFiniteLoss, "non-finite loss or gradient at step " + std::to_string(step));

    adam_step(params, grads, state.adam, lr, config.adam);
    if (!all_finite(params))
      fail(ErrorCode::NonFiniteLoss, "non-finite parameters after step " + std::to_string(step));
    state.global_step = step + 1;
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.log.push_back(rec);
    if (on_step) on_step(rec, params);
  }
  result.params = std::move(params);
  result.state = std::move(state);
  return result;
}

}  // namespace

void validate(const TrainConfig& c) {
  if (c.epochs < 1) fail(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (c.batch_size < 1) fail(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  if (!(c.lr_decay > 0.0 && c.lr_decay <= 1.0)) fail(ErrorCode::InvalidArgument, "lr_decay must be in (0, 1]");
  if (c.lr_every < 1) fail(ErrorCode::InvalidArgument, "lr_every must be >= 1");
  if (!(c.lr0 > 0.0) || !std::isfinite(c.lr0)) fail(ErrorCode::InvalidArgument, "lr0 must be positive");
}

double lr_schedule(std::size_t epoch, const TrainConfig& c) noexcept {
  return c.lr0 * std::pow(c.lr_decay, static_cast<double>(epoch / c.lr_every));
}

std::uint64_t config_hash(const TrainConfig& c, std::size_t dataset_size) {
  std::uint64_t h = hash_label("occo-train");
  h = fold(h, std::uint64_t{c.batch_size});
  h = fold(h, c.lr0);
  h = fold(h, c.lr_decay);
  h = fold(h, std::uint64_t{c.lr_every});
  h = fold(h, c.adam.beta1);
  h = fold(h, c.adam.beta2);
  h = fold(h, c.adam.eps);
  h = fold(h, c.seed);
  h = fold(h, std::uint64_t{dataset_size});
  return h;
}

std::string log_csv(std::span<const StepRecord> log) {
  // Wall time stays out of the file so reruns are byte-identical.
  std::string out = "step,epoch,lr,alpha,cd_coarse,cd_fine,loss\n";
  char line[256];
  for (const auto& r : log) {
    std::snprintf(line, sizeof line, "%llu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<unsigned long long>(r.step), r.epoch, r.lr, r.alpha, r.cd_coarse, r.cd_fine, r.loss);
    out += line;
  }
  return out;
}

std::size_t steps_per_epoch(std::size_t dataset_size, std::size_t batch_size) noexcept {
  return (dataset_size + batch_size - 1) / batch_size;
}

std::vector<std::size_t> epoch_order(std::size_t dataset_size, std::size_t epoch, std::uint64_t seed) {
  std::vector<std::size_t> order(dataset_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, "epoch", {epoch});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  return order;
}

TrainResult pretrain(std::span<const CompletionSample> dataset, const ModelDims& dims, const TrainConfig& config,
                     const StepHook& on_step) {
  validate(config);
  validate(dims);
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "training dataset is empty");
  Rng rng = make_rng(config.seed, "init");
  ModelParams params = init_params(dims, rng);
  TrainState state;
  state.config_hash = config_hash(config, dataset.size());
  state.adam = AdamState::zeros(params.parameter_count());
  return run(std::move(params), std::move(state), dataset, config, on_step);
}

TrainResult resume(const Checkpoint& checkpoint, std::span<const CompletionSample> dataset, const TrainConfig& config,
                   const StepHook& on_step) {
  validate(config);
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "training dataset is empty");
  if (!checkpoint.has_decoder || !checkpoint.train)
    fail(ErrorCode::DimsMismatch, "checkpoint carries no training state");
  if (checkpoint.train->config_hash != config_hash(config, dataset.size()))
    fail(ErrorCode::ConfigMismatch, "training config differs from the checkpointed run");
  return run(checkpoint.params, *checkpoint.train, dataset, config, on_step);
}

double dataset_loss(std::span<const CompletionSample> dataset, const ModelParams& params, double alpha) {
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "dataset is empty");
  std::vector<double> losses(dataset.size());
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    losses[static_cast<std::size_t>(i)] = evaluate(dataset[static_cast<std::size_t>(i)], params, alpha).value;
  double s = 0.0;
  for (double l : losses) s += l;
  return s / static_cast<double>(losses.size());
}

DatasetChamfer dataset_chamfer(std::span<const CompletionSample> dataset, const ModelParams& params) {
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "dataset is empty");
  std::vector<CompletionLoss> losses(dataset.size());
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    losses[static_cast<std::size_t>(i)] = evaluate(dataset[static_cast<std::size_t>(i)], params, 1.0);
  DatasetChamfer out;
  for (const auto& l : losses) {
    out.cd_coarse += l.cd_coarse;
    out.cd_fine += l.cd_fine;
  }
  out.cd_coarse /= static_cast<double>(losses.size());
  out.cd_fine /= static_cast<double>(losses.size());
  return out;
}

}  // namespace occo
