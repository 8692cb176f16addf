// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include <sstream>

#include "occo/checkpoint.hpp"
#include "occo/dataset.hpp"
#include "occo/losses.hpp"
#include "occo/synthetic.hpp"
#include "occo/train.hpp"
#include "support.hpp"

namespace occo {
namespace {

ModelDims small_dims() {
  ModelDims d;
  d.point_mlp_widths = {16, 32};
  d.embed_dim = 32;
  d.coarse_hidden = {32};
  d.n_coarse = 16;
  d.grid_side = 2;
  d.fold_mlp_widths = {16};
  return d;
}

const std::vector<CompletionSample>& small_dataset() {
  static const std::vector<CompletionSample> data = [] {
    GenerationConfig g;
    g.views_per_object = 2;
    g.n_input = 64;
    g.n_coarse = 16;
    g.n_fine = 64;
    g.seed = 5;
    auto samples = generate_dataset(synthetic_objects(5, 5), g).samples;
    round_to_float(samples);
    return samples;
  }();
  return data;
}

TrainConfig small_config(std::size_t batch, std::uint64_t max_steps) {
  TrainConfig c;
  c.batch_size = batch;
  c.lr0 = 1e-3;
  c.epochs = 1000;
  c.max_steps = max_steps;
  c.seed = 9;
  return c;
}

bool same_records(const std::vector<StepRecord>& a, const std::vector<StepRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].step != b[i].step || a[i].epoch != b[i].epoch || a[i].lr != b[i].lr || a[i].alpha != b[i].alpha ||
        a[i].cd_coarse != b[i].cd_coarse || a[i].cd_fine != b[i].cd_fine || a[i].loss != b[i].loss)
      return false;
  return true;
}

TEST(LrSchedule, Examples) {
  const TrainConfig c;
  EXPECT_EQ(lr_schedule(0, c), 1e-4);
  EXPECT_EQ(lr_schedule(9, c), 1e-4);
  EXPECT_DOUBLE_EQ(lr_schedule(10, c), 7e-5);
  EXPECT_DOUBLE_EQ(lr_schedule(25, c), 4.9e-5);
  EXPECT_EQ(c.epochs, 50u);
  EXPECT_EQ(c.batch_size, 32u);
  EXPECT_EQ(c.lr_decay, 0.7);
  EXPECT_EQ(c.lr_every, 10u);
}

TEST(LrSchedule, InvalidConfig) {
  TrainConfig c;
  c.batch_size = 0;
  EXPECT_OCCO_ERROR(validate(c), ErrorCode::InvalidArgument);
  c = TrainConfig{};
  c.lr_decay = 1.5;
  EXPECT_OCCO_ERROR(validate(c), ErrorCode::InvalidArgument);
  c = TrainConfig{};
  c.epochs = 0;
  EXPECT_OCCO_ERROR(validate(c), ErrorCode::InvalidArgument);
}

TEST(Adam, ZeroGradientLeavesParams) {
  Rng rng(1);
  ModelParams q = init_params(small_dims(), rng);
  const auto q0 = q.flatten();
  AdamState fresh;
  adam_step(q, q.zeros_like(), fresh, 1e-3);
  EXPECT_EQ(q.flatten(), q0);
  EXPECT_EQ(fresh.step, 1u);

  ModelParams p = init_params(small_dims(), rng);
  AdamState s = AdamState::zeros(p.parameter_count());
  for (auto& m : s.m) m = 0.5;
  for (auto& v : s.v) v = 0.25;
  adam_step(p, p.zeros_like(), s, 1e-3);
  for (double m : s.m) EXPECT_DOUBLE_EQ(m, 0.45);
  for (double v : s.v) EXPECT_DOUBLE_EQ(v, 0.24975);
}

TEST(Adam, FirstStepIsBoundedByLr) {
  Rng rng(2);
  ModelParams p = init_params(small_dims(), rng);
  ModelParams g = p.zeros_like();
  for (Dense* l : g.layers()) {
    l->weight = Eigen::MatrixXd::Random(l->weight.rows(), l->weight.cols()) * 100.0;
    l->bias = Eigen::VectorXd::Random(l->bias.size()) * 1e-3;
  }
  const auto before = p.flatten();
  AdamState s;
  adam_step(p, g, s, 1e-2);
  const auto after = p.flatten(), grad = g.flatten();
  for (std::size_t i = 0; i < after.size(); ++i) {
    EXPECT_LE(std::abs(after[i] - before[i]), 1e-2 * (1 + 1e-6));
    if (grad[i] != 0.0) {
      EXPECT_LT((after[i] - before[i]) * grad[i], 0.0);
    }
  }
}

TEST(Adam, ThreeStepReference) {
  // Independent evaluation of the bias-corrected recurrence with
  // theta0 = 1, lr = 0.1 and gradients 0.5, -0.3, 0.2.
  double theta = 1.0, m = 0.0, v = 0.0;
  const double grads[] = {0.5, -0.3, 0.2};
  const double expected[] = {0.900000002, 0.8808501989417752, 0.846107430790882};
  for (int s = 0; s < 3; ++s) {
    theta = adam_update(theta, grads[s], m, v, static_cast<std::uint64_t>(s + 1), 0.1);
    EXPECT_NEAR(theta, expected[s], 1e-15);
  }
  EXPECT_NEAR(m, 0.033499999999999995, 1e-17);
  EXPECT_NEAR(v, 0.00037941025000000036, 1e-19);
}

TEST(Adam, ShapeMismatch) {
  Rng rng(3);
  ModelParams p = init_params(small_dims(), rng);
  ModelDims other = small_dims();
  other.embed_dim = 8;
  const ModelParams g = init_params(other, rng);
  AdamState s;
  EXPECT_OCCO_ERROR(adam_step(p, g, s, 1e-3), ErrorCode::ShapeMismatch);
  AdamState wrong = AdamState::zeros(3);
  EXPECT_OCCO_ERROR(adam_step(p, p.zeros_like(), wrong, 1e-3), ErrorCode::ShapeMismatch);
}

TEST(Pretrain, BatchLargerThanDatasetIsOneStepPerEpoch) {
  EXPECT_EQ(steps_per_epoch(10, 32), 1u);
  EXPECT_EQ(steps_per_epoch(10, 10), 1u);
  EXPECT_EQ(steps_per_epoch(10, 3), 4u);
  TrainConfig c = small_config(64, 0);
  c.max_steps.reset();
  c.epochs = 3;
  const TrainResult r = pretrain(small_dataset(), small_dims(), c);
  ASSERT_EQ(r.log.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.log[i].epoch, i);
}

TEST(Pretrain, EpochOrderIsAPermutation) {
  const auto a = epoch_order(50, 3, 7);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(a, epoch_order(50, 3, 7));
  EXPECT_NE(a, epoch_order(50, 4, 7));
}

TEST(Pretrain, LogFollowsSchedules) {
  const TrainConfig c = small_config(4, 12);
  const TrainResult r = pretrain(small_dataset(), small_dims(), c);
  ASSERT_EQ(r.log.size(), 12u);
  const std::size_t spe = steps_per_epoch(small_dataset().size(), 4);
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    const StepRecord& rec = r.log[i];
    EXPECT_EQ(rec.step, i);
    EXPECT_EQ(rec.epoch, i / spe);
    EXPECT_EQ(rec.lr, lr_schedule(rec.epoch, c));
    EXPECT_EQ(rec.alpha, alpha_schedule(rec.step));
    EXPECT_NEAR(rec.loss, rec.cd_coarse + rec.alpha * rec.cd_fine, 1e-12);
    EXPECT_GE(rec.ms, 0.0);
  }
  EXPECT_EQ(r.state.global_step, 12u);
  EXPECT_EQ(r.state.adam.step, 12u);
  const std::string csv = log_csv(r.log);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,epoch,lr,alpha,cd_coarse,cd_fine,loss");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
  }
  EXPECT_EQ(rows, 12u);
}

TEST(Pretrain, DeterministicForSeedAndThreads) {
  const TrainConfig c = small_config(4, 10);
  omp_set_num_threads(1);
  const TrainResult a = pretrain(small_dataset(), small_dims(), c);
  omp_set_num_threads(4);
  const TrainResult b = pretrain(small_dataset(), small_dims(), c);
  omp_set_num_threads(omp_get_num_procs());
  EXPECT_EQ(a.params.flatten(), b.params.flatten());
  EXPECT_TRUE(same_records(a.log, b.log));
  EXPECT_EQ(encode_checkpoint(a.params, true, a.state), encode_checkpoint(b.params, true, b.state));
  TrainConfig other = c;
  other.seed = 10;
  EXPECT_NE(pretrain(small_dataset(), small_dims(), other).params.flatten(), a.params.flatten());
}

TEST(Pretrain, ResumeEqualsUninterrupted) {
  const TrainConfig full = small_config(3, 100);
  const TrainResult straight = pretrain(small_dataset(), small_dims(), full);

  const TrainResult first = pretrain(small_dataset(), small_dims(), small_config(3, 60));
  const Checkpoint ck = decode_checkpoint(encode_checkpoint(first.params, true, first.state));
  const TrainResult second = resume(ck, small_dataset(), full);
  ASSERT_EQ(second.log.size(), 40u);
  EXPECT_EQ(second.log.front().step, 60u);
  EXPECT_EQ(second.params.flatten(), straight.params.flatten());
  std::vector<StepRecord> joined = first.log;
  joined.insert(joined.end(), second.log.begin(), second.log.end());
  EXPECT_TRUE(same_records(joined, straight.log));
}

TEST(Pretrain, ResumeRefusesMismatches) {
  const TrainResult first = pretrain(small_dataset(), small_dims(), small_config(3, 5));
  const std::vector<char> bytes = encode_checkpoint(first.params, true, first.state);
  const Checkpoint ck = decode_checkpoint(bytes);
  EXPECT_OCCO_ERROR(resume(ck, small_dataset(), small_config(4, 10)), ErrorCode::ConfigMismatch);
  const std::vector<CompletionSample> fewer(small_dataset().begin(), small_dataset().end() - 1);
  EXPECT_OCCO_ERROR(resume(ck, fewer, small_config(3, 10)), ErrorCode::ConfigMismatch);
  const Checkpoint no_state = decode_checkpoint(encode_checkpoint(first.params, true));
  EXPECT_OCCO_ERROR(resume(no_state, small_dataset(), small_config(3, 10)), ErrorCode::DimsMismatch);
  std::vector<char> corrupt = bytes;
  corrupt.resize(corrupt.size() - 16);
  EXPECT_OCCO_ERROR(decode_checkpoint(corrupt), ErrorCode::DimsMismatch);
  // Epoch count and step budget may change between runs.
  TrainConfig longer = small_config(3, 10);
  longer.epochs = 2000;
  EXPECT_NO_THROW(resume(ck, small_dataset(), longer));
}

TEST(Pretrain, NonFiniteLossIsReported) {
  std::vector<CompletionSample> data = small_dataset();
  for (auto& s : data)
    for (auto& p : s.fine.points) p = p * 1e300;
  try {
    pretrain(data, small_dims(), small_config(64, 3));
    ADD_FAILURE() << "expected NonFiniteLoss";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteLoss);
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
  }
}

TEST(Pretrain, LossDecreasesOnTinyProblem) {
  const TrainResult r = pretrain(small_dataset(), small_dims(), small_config(4, 150));
  Rng rng = make_rng(9, "init");
  const ModelParams p0 = init_params(small_dims(), rng);
  const DatasetChamfer before = dataset_chamfer(small_dataset(), p0);
  const DatasetChamfer after = dataset_chamfer(small_dataset(), r.params);
  EXPECT_LT(after.cd_coarse, before.cd_coarse);
  EXPECT_LT(after.cd_fine, before.cd_fine);
  EXPECT_NEAR(dataset_loss(small_dataset(), r.params, 1.0), after.cd_coarse + after.cd_fine, 1e-12);
}

}  // namespace
}  // namespace occo
