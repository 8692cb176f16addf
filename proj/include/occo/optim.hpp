// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "occo/model.hpp"

namespace occo {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Moments are kept in ModelParams::flatten() order.
struct AdamState {
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  static AdamState zeros(std::size_t n) { return {0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

// One bias-corrected Adam update, no weight decay. An empty state is
// initialised to zeros; ShapeMismatch when grads or moments disagree with params.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& config = {});

// Scalar form of the same update, used for hand-checkable cases.
double adam_update(double theta, double grad, double& m, double& v, std::uint64_t step, double lr,
                   const AdamConfig& config = {});

}  // namespace occo
