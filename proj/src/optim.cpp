// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/optim.hpp"

#include <cmath>

#include "occo/error.hpp"

namespace occo {

double adam_update(double theta, double grad, double& m, double& v, std::uint64_t step, double lr,
                   const AdamConfig& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * grad;
  v = c.beta2 * v + (1.0 - c.beta2) * grad * grad;
  const double t = static_cast<double>(step);
  const double m_hat = m / (1.0 - std::pow(c.beta1, t));
  const double v_hat = v / (1.0 - std::pow(c.beta2, t));
  return theta - lr * m_hat / (std::sqrt(v_hat) + c.eps);
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr, const AdamConfig& config) {
  if (!(params.dims == grads.dims)) fail(ErrorCode::ShapeMismatch, "gradient dims differ from parameter dims");
  const std::size_t n = params.parameter_count();
  if (grads.parameter_count() != n) fail(ErrorCode::ShapeMismatch, "gradient size differs from parameter size");
  if (state.m.empty() && state.v.empty() && state.step == 0) state = AdamState::zeros(n);
  if (state.m.size() != n || state.v.size() != n) fail(ErrorCode::ShapeMismatch, "Adam moments do not match params");

  ++state.step;
  auto p_layers = params.layers();
  const auto g_layers = grads.layers();
  std::size_t k = 0;
  for (std::size_t l = 0; l < p_layers.size(); ++l) {
    Dense& p = *p_layers[l];
    const Dense& g = *g_layers[l];
    if (p.weight.rows() != g.weight.rows() || p.weight.cols() != g.weight.cols() || p.bias.size() != g.bias.size())
      fail(ErrorCode::ShapeMismatch, "layer shape mismatch in Adam update");
    for (Eigen::Index r = 0; r < p.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < p.weight.cols(); ++c, ++k)
        p.weight(r, c) = adam_update(p.weight(r, c), g.weight(r, c), state.m[k], state.v[k], state.step, lr, config);
    for (Eigen::Index r = 0; r < p.bias.size(); ++r, ++k)
      p.bias(r) = adam_update(p.bias(r), g.bias(r), state.m[k], state.v[k], state.step, lr, config);
  }
}

}  // namespace occo
