// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/model.hpp"

#include <cmath>
#include <string>

#include "occo/dataset.hpp"
#include "occo/error.hpp"

namespace occo {
namespace {

Dense make_dense(Eigen::Index in, Eigen::Index out) {
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

std::vector<Dense> make_stack(int in, const std::vector<int>& hidden, int out) {
  std::vector<Dense> stack;
  int prev = in;
  for (int w : hidden) {
    stack.push_back(make_dense(prev, w));
    prev = w;
  }
  stack.push_back(make_dense(prev, out));
  return stack;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& x) { return x.cwiseMax(0.0); }

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& grad, const Eigen::MatrixXd& pre) {
  return (pre.array() > 0.0).select(grad, 0.0);
}

std::vector<Point3> columns_to_points(const Eigen::MatrixXd& m) {
  std::vector<Point3> pts(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) pts[static_cast<std::size_t>(c)] = {m(0, c), m(1, c), m(2, c)};
  return pts;
}

Eigen::MatrixXd points_to_columns(std::span<const Point3> pts) {
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    m(0, c) = pts[i].x;
    m(1, c) = pts[i].y;
    m(2, c) = pts[i].z;
  }
  return m;
}

void encode_into(const PointCloud& cloud, std::span<const Dense> layers, ForwardCache& cache) {
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "cannot encode an empty cloud");
  cache.n_points = cloud.size();
  cache.input = points_to_columns(cloud.points);
  cache.encoder_pre.clear();
  cache.encoder_out.clear();
  const Eigen::MatrixXd* x = &cache.input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd pre = (layers[l].weight * *x).colwise() + layers[l].bias;
    const bool last = l + 1 == layers.size();
    cache.encoder_out.push_back(last ? pre : relu(pre));
    cache.encoder_pre.push_back(std::move(pre));
    x = &cache.encoder_out.back();
  }
  const Eigen::MatrixXd& feat = cache.encoder_out.back();
  cache.embedding.resize(feat.rows());
  cache.argmax.assign(static_cast<std::size_t>(feat.rows()), 0);
  for (Eigen::Index j = 0; j < feat.rows(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < feat.cols(); ++i)
      if (feat(j, i) > feat(j, best)) best = i;
    cache.argmax[static_cast<std::size_t>(j)] = best;
    cache.embedding(j) = feat(j, best);
  }
}

}  // namespace

ModelDims ModelDims::full() {
  ModelDims d;
  d.point_mlp_widths = {64, 128, 256};
  d.embed_dim = 1024;
  d.coarse_hidden = {1024, 1024};
  d.n_coarse = 1024;
  d.grid_side = 4;
  d.fold_mlp_widths = {512, 512};
  return d;
}

void validate(const ModelDims& dims) {
  auto positive = [](const std::vector<int>& v) {
    for (int w : v)
      if (w < 1) return false;
    return true;
  };
  if (!positive(dims.point_mlp_widths) || !positive(dims.coarse_hidden) || !positive(dims.fold_mlp_widths) ||
      dims.embed_dim < 1 || dims.n_coarse < 1 || dims.grid_side < 1)
    fail(ErrorCode::InvalidArgument, "all model widths and counts must be >= 1");
}

std::vector<Dense*> ModelParams::layers() {
  std::vector<Dense*> out;
  for (auto* stack : {&encoder, &coarse, &folding})
    for (auto& d : *stack) out.push_back(&d);
  return out;
}

std::vector<const Dense*> ModelParams::layers() const {
  std::vector<const Dense*> out;
  for (const auto* stack : {&encoder, &coarse, &folding})
    for (const auto& d : *stack) out.push_back(&d);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const Dense* d : layers()) n += static_cast<std::size_t>(d->weight.size() + d->bias.size());
  return n;
}

std::size_t ModelParams::encoder_parameter_count() const {
  std::size_t n = 0;
  for (const Dense& d : encoder) n += static_cast<std::size_t>(d.weight.size() + d.bias.size());
  return n;
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const Dense* d : layers()) {
    for (Eigen::Index r = 0; r < d->weight.rows(); ++r)
      for (Eigen::Index c = 0; c < d->weight.cols(); ++c) flat.push_back(d->weight(r, c));
    for (Eigen::Index r = 0; r < d->bias.size(); ++r) flat.push_back(d->bias(r));
  }
  return flat;
}

void ModelParams::unflatten(std::span<const double> flat) {
  if (flat.size() != parameter_count()) fail(ErrorCode::ShapeMismatch, "flat parameter vector has the wrong length");
  std::size_t k = 0;
  for (Dense* d : layers()) {
    for (Eigen::Index r = 0; r < d->weight.rows(); ++r)
      for (Eigen::Index c = 0; c < d->weight.cols(); ++c) d->weight(r, c) = flat[k++];
    for (Eigen::Index r = 0; r < d->bias.size(); ++r) d->bias(r) = flat[k++];
  }
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.dims = dims;
  auto zero_stack = [](const std::vector<Dense>& src) {
    std::vector<Dense> out;
    for (const Dense& d : src) out.push_back(make_dense(d.weight.cols(), d.weight.rows()));
    return out;
  };
  z.encoder = zero_stack(encoder);
  z.coarse = zero_stack(coarse);
  z.folding = zero_stack(folding);
  return z;
}

ModelParams zero_params(const ModelDims& dims) {
  validate(dims);
  ModelParams p;
  p.dims = dims;
  p.encoder = make_stack(3, dims.point_mlp_widths, dims.embed_dim);
  p.coarse = make_stack(dims.embed_dim, dims.coarse_hidden, 3 * dims.n_coarse);
  p.folding = make_stack(dims.fold_input_dim(), dims.fold_mlp_widths, 3);
  return p;
}

ModelParams init_params(const ModelDims& dims, Rng& rng) {
  ModelParams p = zero_params(dims);
  for (Dense* d : p.layers()) {
    const double bound = std::sqrt(6.0 / static_cast<double>(d->fan_in() + d->fan_out()));
    for (Eigen::Index r = 0; r < d->weight.rows(); ++r)
      for (Eigen::Index c = 0; c < d->weight.cols(); ++c) d->weight(r, c) = uniform(rng, -bound, bound);
  }
  return p;
}

Eigen::MatrixXd folding_grid(int side) {
  Eigen::MatrixXd g(2, side * side);
  auto coord = [side](int k) { return side == 1 ? 0.0 : -0.05 + 0.1 * static_cast<double>(k) / (side - 1); };
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      g(0, a * side + b) = coord(a);
      g(1, a * side + b) = coord(b);
    }
  return g;
}

std::pair<Embedding, ForwardCache> encoder_forward(const PointCloud& cloud, const ModelParams& params) {
  ForwardCache cache;
  cache.dims = params.dims;
  encode_into(cloud, params.encoder, cache);
  Embedding e{cache.embedding, std::nullopt};
  return {std::move(e), std::move(cache)};
}

Decoded decode(const Embedding& embedding, const ModelParams& params, ForwardCache* cache) {
  const ModelDims& dims = params.dims;
  if (embedding.values.size() != dims.embed_dim) fail(ErrorCode::ShapeMismatch, "embedding width does not match dims");
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.dims = dims;
  c.embedding = embedding.values;

  c.coarse_pre.clear();
  c.coarse_out.clear();
  const Eigen::VectorXd* h = &c.embedding;
  for (std::size_t l = 0; l < params.coarse.size(); ++l) {
    Eigen::VectorXd pre = params.coarse[l].weight * *h + params.coarse[l].bias;
    const bool last = l + 1 == params.coarse.size();
    c.coarse_out.push_back(last ? pre : Eigen::VectorXd(pre.cwiseMax(0.0)));
    c.coarse_pre.push_back(std::move(pre));
    h = &c.coarse_out.back();
  }
  c.coarse = Eigen::Map<const Eigen::MatrixXd>(c.coarse_out.back().data(), 3, dims.n_coarse);

  const int cells = dims.grid_side * dims.grid_side;
  const Eigen::MatrixXd grid = folding_grid(dims.grid_side);
  const Eigen::Index n_fine = dims.fine_count();
  c.fold_coarse.resize(3, n_fine);
  c.fold_grid.resize(2, n_fine);
  for (int k = 0; k < dims.n_coarse; ++k)
    for (int g = 0; g < cells; ++g) {
      c.fold_coarse.col(k * cells + g) = c.coarse.col(k);
      c.fold_grid.col(k * cells + g) = grid.col(g);
    }

  c.fold_pre.clear();
  c.fold_out.clear();
  const int e_dim = dims.embed_dim;
  for (std::size_t l = 0; l < params.folding.size(); ++l) {
    const Dense& d = params.folding[l];
    Eigen::MatrixXd pre;
    if (l == 0) {
      const Eigen::VectorXd shared = d.weight.leftCols(e_dim) * c.embedding + d.bias;
      pre = d.weight.middleCols(e_dim, 3) * c.fold_coarse + d.weight.rightCols(2) * c.fold_grid;
      pre.colwise() += shared;
    } else {
      pre = (d.weight * c.fold_out.back()).colwise() + d.bias;
    }
    const bool last = l + 1 == params.folding.size();
    c.fold_out.push_back(last ? pre : relu(pre));
    c.fold_pre.push_back(std::move(pre));
  }
  c.fine = c.fold_coarse + c.fold_out.back();
  c.decoded = true;

  Decoded out;
  out.coarse.points = columns_to_points(c.coarse);
  out.fine.points = columns_to_points(c.fine);
  return out;
}

ForwardCache forward(const PointCloud& cloud, const ModelParams& params) {
  auto [embedding, cache] = encoder_forward(cloud, params);
  decode(embedding, params, &cache);
  return std::move(cache);
}

BackwardResult backward_weighted(const CompletionSample& sample, const ModelParams& params, const ForwardCache& cache,
                                 double alpha) {
  const ModelDims& dims = params.dims;
  if (!cache.decoded || !(cache.dims == dims) || cache.n_points != sample.occluded.size() ||
      cache.encoder_out.size() != params.encoder.size() || cache.fold_out.size() != params.folding.size() ||
      cache.coarse_out.size() != params.coarse.size())
    fail(ErrorCode::StaleCache, "forward cache does not match the sample and parameters");

  BackwardResult result;
  const std::vector<Point3> coarse_pred = columns_to_points(cache.coarse);
  const std::vector<Point3> fine_pred = columns_to_points(cache.fine);
  result.loss = completion_loss_weighted(coarse_pred, fine_pred, sample.coarse.points, sample.fine.points, alpha);
  ModelParams& grads = result.grads = params.zeros_like();

  const int e_dim = dims.embed_dim;
  const int cells = dims.grid_side * dims.grid_side;
  Eigen::MatrixXd grad_coarse = points_to_columns(result.loss.grad_coarse);
  const Eigen::MatrixXd grad_fine = points_to_columns(result.loss.grad_fine);
  Eigen::VectorXd grad_embed = Eigen::VectorXd::Zero(e_dim);

  auto fold_into_coarse = [&](const Eigen::MatrixXd& per_fine) {
    for (int k = 0; k < dims.n_coarse; ++k) grad_coarse.col(k) += per_fine.middleCols(k * cells, cells).rowwise().sum();
  };

  // Folding decoder: fine = repeated coarse + displacement.
  fold_into_coarse(grad_fine);
  Eigen::MatrixXd dz = grad_fine;
  for (std::size_t l = params.folding.size(); l-- > 0;) {
    const Dense& d = params.folding[l];
    Dense& g = grads.folding[l];
    if (l + 1 != params.folding.size()) dz = relu_mask(dz, cache.fold_pre[l]);
    g.bias = dz.rowwise().sum();
    if (l > 0) {
      g.weight = dz * cache.fold_out[l - 1].transpose();
      dz = d.weight.transpose() * dz;
    } else {
      g.weight.leftCols(e_dim) = g.bias * cache.embedding.transpose();
      g.weight.middleCols(e_dim, 3) = dz * cache.fold_coarse.transpose();
      g.weight.rightCols(2) = dz * cache.fold_grid.transpose();
      grad_embed += d.weight.leftCols(e_dim).transpose() * g.bias;
      fold_into_coarse(d.weight.middleCols(e_dim, 3).transpose() * dz);
    }
  }

  // Coarse decoder; the 3 x n_coarse matrix is the column-major output vector.
  Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(grad_coarse.data(), grad_coarse.size());
  for (std::size_t l = params.coarse.size(); l-- > 0;) {
    const Dense& d = params.coarse[l];
    Dense& g = grads.coarse[l];
    if (l + 1 != params.coarse.size()) dv = (cache.coarse_pre[l].array() > 0.0).select(dv, 0.0);
    const Eigen::VectorXd& in = l > 0 ? cache.coarse_out[l - 1] : cache.embedding;
    g.weight = dv * in.transpose();
    g.bias = dv;
    dv = d.weight.transpose() * dv;
  }
  grad_embed += dv;

  // Max-pool routes each channel's gradient to its winning point only, so
  // the last encoder layer is handled sparsely.
  const std::size_t last = params.encoder.size() - 1;
  const Eigen::MatrixXd& last_in = last > 0 ? cache.encoder_out[last - 1] : cache.input;
  Dense& g_last = grads.encoder[last];
  Eigen::MatrixXd dfeat = Eigen::MatrixXd::Zero(last_in.rows(), last_in.cols());
  for (Eigen::Index j = 0; j < e_dim; ++j) {
    const Eigen::Index win = cache.argmax[static_cast<std::size_t>(j)];
    const double gj = grad_embed(j);
    g_last.weight.row(j) = gj * last_in.col(win).transpose();
    g_last.bias(j) = gj;
    if (last > 0) dfeat.col(win) += gj * params.encoder[last].weight.row(j).transpose();
  }
  for (std::size_t l = last; l-- > 0;) {
    const Dense& d = params.encoder[l];
    Dense& g = grads.encoder[l];
    dfeat = relu_mask(dfeat, cache.encoder_pre[l]);
    const Eigen::MatrixXd& in = l > 0 ? cache.encoder_out[l - 1] : cache.input;
    g.weight = dfeat * in.transpose();
    g.bias = dfeat.rowwise().sum();
    if (l > 0) dfeat = d.weight.transpose() * dfeat;
  }
  return result;
}

BackwardResult backward(const CompletionSample& sample, const ModelParams& params, const ForwardCache& cache,
                        std::uint64_t step) {
  return backward_weighted(sample, params, cache, alpha_schedule(step));
}

CompletionLoss evaluate(const CompletionSample& sample, const ModelParams& params, double alpha) {
  const ForwardCache cache = forward(sample.occluded, params);
  const std::vector<Point3> coarse_pred = columns_to_points(cache.coarse);
  const std::vector<Point3> fine_pred = columns_to_points(cache.fine);
  return completion_loss_weighted(coarse_pred, fine_pred, sample.coarse.points, sample.fine.points, alpha, false);
}

EncoderParams encoder_of(const ModelParams& params) { return {params.dims, params.encoder}; }

ForwardCache encode_with(const PointCloud& cloud, const EncoderParams& encoder) {
  ForwardCache cache;
  cache.dims = encoder.dims;
  encode_into(cloud, encoder.encoder, cache);
  return cache;
}

Eigen::VectorXd embed(const PointCloud& cloud, const EncoderParams& encoder) {
  return encode_with(cloud, encoder).embedding;
}

}  // namespace occo
