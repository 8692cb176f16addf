// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "occo/error.hpp"
#include "occo/seed.hpp"
#include "occo/train.hpp"

namespace occo {
namespace {

struct Contingency {
  std::vector<std::vector<std::size_t>> table;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::size_t n = 0;
};

std::vector<int> compact_labels(std::span<const int> labels, std::size_t& count) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids[l]);
  count = ids.size();
  return out;
}

Contingency contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "clusterings have different lengths");
  std::size_t ka = 0, kb = 0;
  const auto ca = compact_labels(a, ka);
  const auto cb = compact_labels(b, kb);
  Contingency c;
  c.n = a.size();
  c.table.assign(ka, std::vector<std::size_t>(kb, 0));
  c.rows.assign(ka, 0);
  c.cols.assign(kb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++c.table[ca[i]][cb[i]];
    ++c.rows[ca[i]];
    ++c.cols[cb[i]];
  }
  return c;
}

double entropy_of(const std::vector<std::size_t>& counts, std::size_t n) {
  double h = 0.0;
  for (std::size_t c : counts)
    if (c > 0) {
      const double p = static_cast<double>(c) / static_cast<double>(n);
      h -= p * std::log(p);
    }
  return h;
}

double mi_of(const Contingency& c) {
  const double n = static_cast<double>(c.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < c.rows.size(); ++i)
    for (std::size_t j = 0; j < c.cols.size(); ++j) {
      const double nij = static_cast<double>(c.table[i][j]);
      if (nij > 0)
        mi += nij / n * std::log(n * nij / (static_cast<double>(c.rows[i]) * static_cast<double>(c.cols[j])));
    }
  return mi;
}

double emi_of(const Contingency& c) {
  const double n = static_cast<double>(c.n);
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (std::size_t ai_ : c.rows)
    for (std::size_t bj_ : c.cols) {
      const double ai = static_cast<double>(ai_), bj = static_cast<double>(bj_);
      const double fixed = std::lgamma(ai + 1) + std::lgamma(bj + 1) + std::lgamma(n - ai + 1) +
                           std::lgamma(n - bj + 1) - lg_n;
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = fixed - std::lgamma(nij + 1) - std::lgamma(ai - nij + 1) - std::lgamma(bj - nij + 1) -
                             std::lgamma(n - ai - bj + nij + 1);
        emi += nij / n * std::log(n * nij / (ai * bj)) * std::exp(log_p);
      }
    }
  return emi;
}

bool is_bijection(const Contingency& c) {
  if (c.rows.size() != c.cols.size()) return false;
  for (const auto& row : c.table)
    if (std::count_if(row.begin(), row.end(), [](std::size_t v) { return v > 0; }) != 1) return false;
  return true;
}

double sq_dist(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& c, Eigen::Index j) {
  return (x.row(i) - c.row(j)).squaredNorm();
}

Eigen::MatrixXd plus_plus_seeding(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(k, x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sq_dist(x, i, c, 0);
  for (int m = 1; m < k; ++m) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double r = uniform01(rng) * total;
      double cum = 0.0;
      pick = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = d2[static_cast<std::size_t>(i)];
        cum += v;
        if (v > 0.0 && cum > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0)
        for (Eigen::Index i = n; i-- > 0;)
          if (d2[static_cast<std::size_t>(i)] > 0.0) {
            pick = i;
            break;
          }
    } else {
      pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    c.row(m) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], sq_dist(x, i, c, m));
  }
  return c;
}

void rescale_filter(auto&& dir, double target) {
  const double norm = dir.norm();
  if (norm > 0.0) dir *= target / norm;
}

}  // namespace

KMeansResult lloyd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& initial, std::size_t max_iterations) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = initial.rows();
  if (k < 1 || initial.cols() != x.cols()) fail(ErrorCode::ShapeMismatch, "initial centroids do not match the data");
  KMeansResult r;
  r.centroids = initial;
  r.clustering.k = static_cast<int>(k);
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(x, i, r.centroids, 0);
      for (Eigen::Index j = 1; j < k; ++j) {
        const double d = sq_dist(x, i, r.centroids, j);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(j);
        }
      }
      inertia += best_d;
      if (assign[static_cast<std::size_t>(i)] != best) changed = true;
      assign[static_cast<std::size_t>(i)] = best;
    }
    r.trace.push_back(inertia);
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (Eigen::Index j = 0; j < k; ++j)
      if (counts[static_cast<std::size_t>(j)] > 0)
        r.centroids.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
  }
  r.clustering.labels = assign;
  r.inertia = r.trace.back();
  return r;
}

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed, const KMeansConfig& config) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (x.rows() < k) fail(ErrorCode::TooFewItems, "fewer items than clusters");
  const std::size_t restarts = std::max<std::size_t>(1, config.restarts);
  std::vector<KMeansResult> runs(restarts);
  const auto count = static_cast<std::ptrdiff_t>(restarts);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    Rng rng = make_rng(seed, "kmeans-restart", {static_cast<std::uint64_t>(r)});
    runs[static_cast<std::size_t>(r)] = lloyd(x, plus_plus_seeding(x, k, rng), config.max_iterations);
    runs[static_cast<std::size_t>(r)].restart = static_cast<std::size_t>(r);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  return std::move(runs[best]);
}

double entropy(std::span<const int> labels) {
  std::size_t k = 0;
  const auto c = compact_labels(labels, k);
  std::vector<std::size_t> counts(k, 0);
  for (int l : c) ++counts[static_cast<std::size_t>(l)];
  return entropy_of(counts, labels.size());
}

double mutual_information(std::span<const int> a, std::span<const int> b) { return mi_of(contingency(a, b)); }

double expected_mutual_information(std::span<const int> a, std::span<const int> b) {
  return emi_of(contingency(a, b));
}

double ami(std::span<const int> a, std::span<const int> b) {
  const Contingency c = contingency(a, b);
  if (c.n == 0) return 0.0;
  double ha = entropy_of(c.rows, c.n);
  double hb = entropy_of(c.cols, c.n);
  double mi = mi_of(c);
  if (is_bijection(c)) {
    hb = ha;
    mi = ha;
  }
  const double emi = emi_of(c);
  const double denom = 0.5 * (ha + hb) - emi;
  if (denom == 0.0) return 0.0;
  return (mi - emi) / denom;
}

Eigen::MatrixXd embed_all(std::span<const PointCloud> clouds, const EncoderParams& encoder) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(clouds.size()), encoder.dims.embed_dim);
  const auto n = static_cast<std::ptrdiff_t>(clouds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out.row(i) = embed(clouds[static_cast<std::size_t>(i)], encoder).transpose();
  return out;
}

std::vector<std::vector<TransformSpec>> cumulative_rows(const TransformSpec& jitter, const TransformSpec& translate,
                                                        const TransformSpec& rotate) {
  return {{}, {jitter}, {jitter, translate}, {jitter, translate, rotate}};
}

std::string row_name(std::size_t row) {
  static const char* names[] = {"none", "J", "J+T", "J+T+R"};
  return row < 4 ? names[row] : "row" + std::to_string(row);
}

std::vector<PointCloud> transform_all(std::span<const PointCloud> clouds, std::span<const TransformSpec> row,
                                      std::uint64_t seed) {
  std::vector<PointCloud> out(clouds.begin(), clouds.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rng rng = make_rng(seed, "transform", {i});
    for (const TransformSpec& t : row) out[i] = apply_transform(out[i], t, rng);
  }
  return out;
}

std::vector<RobustnessRow> robustness_probe(const EncoderParams& encoder, std::span<const PointCloud> clouds,
                                            std::span<const std::vector<TransformSpec>> rows, std::uint64_t seed,
                                            std::size_t seeds, int k_override) {
  std::vector<int> labels;
  for (const auto& c : clouds) {
    if (!c.label) fail(ErrorCode::InvalidArgument, "robustness probe needs labelled clouds");
    labels.push_back(*c.label);
  }
  std::size_t k = 0;
  compact_labels(labels, k);
  if (k_override > 0) k = static_cast<std::size_t>(k_override);
  std::vector<RobustnessRow> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RobustnessRow row;
    row.name = row_name(r);
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto moved = transform_all(clouds, rows[r], derive_seed(seed, "robustness", {s}));
      const auto km = kmeans(embed_all(moved, encoder), static_cast<int>(k), derive_seed(seed, "robustness-kmeans", {s}));
      row.values.push_back(ami(km.clustering.labels, labels));
    }
    const double n = static_cast<double>(row.values.size());
    row.mean = std::accumulate(row.values.begin(), row.values.end(), 0.0) / n;
    if (row.values.size() > 1) {
      double ss = 0.0;
      for (double v : row.values) ss += (v - row.mean) * (v - row.mean);
      row.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<int> ProbeModel::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd z = (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
  const Eigen::MatrixXd scores = (z * weights.transpose()).rowwise() + bias.transpose();
  std::vector<int> out;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = c;
    out.push_back(classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

ProbeModel fit_linear_probe(const Eigen::MatrixXd& x, std::span<const int> y, const ProbeConfig& config) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) fail(ErrorCode::LengthMismatch, "features and labels differ");
  ProbeModel m;
  m.classes.assign(y.begin(), y.end());
  std::sort(m.classes.begin(), m.classes.end());
  m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
  if (m.classes.size() < 2) fail(ErrorCode::SingleClass, "linear probe needs at least two classes");

  const double n = static_cast<double>(x.rows());
  m.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  m.scale = (centered.array().square().colwise().sum() / n).sqrt().transpose();
  for (Eigen::Index j = 0; j < m.scale.size(); ++j)
    if (!(m.scale(j) > 1e-12)) m.scale(j) = 1.0;
  const Eigen::MatrixXd z = centered.array().rowwise() / m.scale.transpose().array();

  const auto nc = static_cast<Eigen::Index>(m.classes.size());
  Eigen::MatrixXd target(x.rows(), nc);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index c = 0; c < nc; ++c)
      target(i, c) = y[static_cast<std::size_t>(i)] == m.classes[static_cast<std::size_t>(c)] ? 1.0 : -1.0;

  m.weights = Eigen::MatrixXd::Zero(nc, x.cols());
  m.bias = Eigen::VectorXd::Zero(nc);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const Eigen::MatrixXd scores = (z * m.weights.transpose()).rowwise() + m.bias.transpose();
    const Eigen::MatrixXd active = ((target.array() * scores.array()) < 1.0).cast<double>() * target.array();
    const Eigen::MatrixXd grad_w = -(active.transpose() * z) / n + config.l2 * m.weights;
    const Eigen::VectorXd grad_b = -active.colwise().sum().transpose() / n;
    m.weights -= config.learning_rate * grad_w;
    m.bias -= config.learning_rate * grad_b;
  }
  return m;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) fail(ErrorCode::LengthMismatch, "prediction and truth lengths differ");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double linear_probe(const Eigen::MatrixXd& train_x, std::span<const int> train_y, const Eigen::MatrixXd& test_x,
                    std::span<const int> test_y, const ProbeConfig& config) {
  const ProbeModel m = fit_linear_probe(train_x, train_y, config);
  return accuracy(m.predict(test_x), test_y);
}

std::size_t mask_size(std::size_t n, double fraction) noexcept {
  const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, raw)));
}

Mask activation_mask(std::span<const double> activations, double fraction) {
  const std::size_t n = activations.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return activations[a] > activations[b]; });
  Mask m(n, 0);
  const std::size_t k = mask_size(n, fraction);
  for (std::size_t i = 0; i < k; ++i) m[idx[i]] = 1;
  return m;
}

Eigen::MatrixXd dissection_miou(const std::vector<std::vector<Mask>>& channel_masks,
                                const std::vector<std::vector<Mask>>& concept_masks) {
  const std::size_t objects = channel_masks.empty() ? (concept_masks.empty() ? 0 : concept_masks[0].size())
                                                    : channel_masks[0].size();
  std::vector<std::size_t> lengths;
  auto check = [&](const std::vector<std::vector<Mask>>& masks) {
    for (const auto& per_object : masks) {
      if (per_object.size() != objects) fail(ErrorCode::MaskLengthMismatch, "mask object counts differ");
      if (lengths.empty())
        for (const auto& m : per_object) lengths.push_back(m.size());
      for (std::size_t o = 0; o < objects; ++o)
        if (per_object[o].size() != lengths[o]) fail(ErrorCode::MaskLengthMismatch, "mask lengths differ");
    }
  };
  check(channel_masks);
  check(concept_masks);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(channel_masks.size()),
                                              static_cast<Eigen::Index>(concept_masks.size()));
  if (objects == 0) return out;
  for (std::size_t k = 0; k < channel_masks.size(); ++k)
    for (std::size_t c = 0; c < concept_masks.size(); ++c) {
      double sum = 0.0;
      for (std::size_t o = 0; o < objects; ++o) {
        const Mask& a = channel_masks[k][o];
        const Mask& b = concept_masks[c][o];
        std::size_t inter = 0, uni = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          inter += a[i] && b[i];
          uni += a[i] || b[i];
        }
        if (uni > 0) sum += static_cast<double>(inter) / static_cast<double>(uni);
      }
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = sum / static_cast<double>(objects);
    }
  return out;
}

DetectionCounts count_detected_concepts(const Eigen::MatrixXd& miou, double threshold) {
  DetectionCounts d;
  d.per_concept.assign(static_cast<std::size_t>(miou.cols()), 0);
  for (Eigen::Index k = 0; k < miou.rows(); ++k)
    for (Eigen::Index c = 0; c < miou.cols(); ++c)
      if (miou(k, c) > threshold) {
        ++d.total;
        ++d.per_concept[static_cast<std::size_t>(c)];
      }
  for (std::size_t v : d.per_concept) d.unique += v > 0;
  return d;
}

std::vector<LayerDissection> dissect(const EncoderParams& encoder, std::span<const PartCloud> objects, int concepts,
                                     double fraction, double threshold) {
  if (concepts < 1) fail(ErrorCode::InvalidArgument, "need at least one concept");
  for (const auto& o : objects)
    if (o.parts.size() != o.cloud.size()) fail(ErrorCode::MaskLengthMismatch, "part labels do not match the cloud");
  const std::size_t layers = encoder.encoder.size();
  // masks[layer][channel][object]
  std::vector<std::vector<std::vector<Mask>>> masks(layers);
  for (std::size_t l = 0; l < layers; ++l)
    masks[l].assign(static_cast<std::size_t>(encoder.encoder[l].fan_out()), std::vector<Mask>(objects.size()));
  const auto n = static_cast<std::ptrdiff_t>(objects.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t o = 0; o < n; ++o) {
    const ForwardCache cache = encode_with(objects[static_cast<std::size_t>(o)].cloud, encoder);
    for (std::size_t l = 0; l < layers; ++l) {
      const Eigen::MatrixXd& f = cache.point_features()[l];
      std::vector<double> row(static_cast<std::size_t>(f.cols()));
      for (Eigen::Index k = 0; k < f.rows(); ++k) {
        for (Eigen::Index i = 0; i < f.cols(); ++i) row[static_cast<std::size_t>(i)] = f(k, i);
        masks[l][static_cast<std::size_t>(k)][static_cast<std::size_t>(o)] = activation_mask(row, fraction);
      }
    }
  }
  std::vector<std::vector<Mask>> concept_masks(static_cast<std::size_t>(concepts), std::vector<Mask>(objects.size()));
  for (std::size_t o = 0; o < objects.size(); ++o)
    for (int c = 0; c < concepts; ++c) {
      Mask m(objects[o].parts.size(), 0);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = objects[o].parts[i] == c;
      concept_masks[static_cast<std::size_t>(c)][o] = std::move(m);
    }
  std::vector<LayerDissection> out;
  for (std::size_t l = 0; l < layers; ++l) {
    LayerDissection d;
    d.layer = l;
    d.miou = dissection_miou(masks[l], concept_masks);
    d.counts = count_detected_concepts(d.miou, threshold);
    out.push_back(std::move(d));
  }
  return out;
}

ModelParams filter_normalized_direction(const ModelParams& theta, Rng& rng) {
  ModelParams d = theta.zeros_like();
  auto dl = d.layers();
  const auto tl = theta.layers();
  for (std::size_t l = 0; l < dl.size(); ++l) {
    Dense& dir = *dl[l];
    const Dense& ref = *tl[l];
    for (Eigen::Index r = 0; r < dir.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < dir.weight.cols(); ++c) dir.weight(r, c) = standard_normal(rng);
    for (Eigen::Index r = 0; r < dir.bias.size(); ++r) dir.bias(r) = standard_normal(rng);
    for (Eigen::Index r = 0; r < dir.weight.rows(); ++r) rescale_filter(dir.weight.row(r), ref.weight.row(r).norm());
    rescale_filter(dir.bias, ref.bias.norm());
    if (ref.bias.norm() == 0.0) dir.bias.setZero();
    for (Eigen::Index r = 0; r < dir.weight.rows(); ++r)
      if (ref.weight.row(r).norm() == 0.0) dir.weight.row(r).setZero();
  }
  return d;
}

ModelParams offset_params(const ModelParams& theta, const ModelParams& delta, const ModelParams& eta, double a,
                          double b) {
  ModelParams out = theta;
  if (a == 0.0 && b == 0.0) return out;
  auto ol = out.layers();
  const auto dl = delta.layers();
  const auto el = eta.layers();
  for (std::size_t l = 0; l < ol.size(); ++l) {
    ol[l]->weight += a * dl[l]->weight + b * el[l]->weight;
    ol[l]->bias += a * dl[l]->bias + b * el[l]->bias;
  }
  return out;
}

LandscapeSlice landscape_slice(const ModelParams& theta, std::span<const CompletionSample> dataset, int grid_side,
                               std::uint64_t seed, double alpha) {
  if (grid_side < 3 || grid_side % 2 == 0) fail(ErrorCode::InvalidArgument, "grid side must be odd and >= 3");
  LandscapeSlice s;
  s.grid_side = grid_side;
  s.seed = seed;
  Rng rd = make_rng(seed, "landscape-delta");
  Rng re = make_rng(seed, "landscape-eta");
  s.delta = filter_normalized_direction(theta, rd);
  s.eta = filter_normalized_direction(theta, re);
  const int half = grid_side / 2;
  for (int i = 0; i < grid_side; ++i) s.coords.push_back(static_cast<double>(i - half) / half);
  s.values.resize(grid_side, grid_side);
  const std::ptrdiff_t nodes = static_cast<std::ptrdiff_t>(grid_side) * grid_side;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t node = 0; node < nodes; ++node) {
    const int i = static_cast<int>(node / grid_side), j = static_cast<int>(node % grid_side);
    const ModelParams p = offset_params(theta, s.delta, s.eta, s.coords[static_cast<std::size_t>(i)],
                                        s.coords[static_cast<std::size_t>(j)]);
    s.values(i, j) = dataset_loss(dataset, p, alpha);
  }
  return s;
}

}  // namespace occo
