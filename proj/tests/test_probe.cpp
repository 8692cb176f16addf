// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include <omp.h>

#include <algorithm>
#include <numeric>

#include "occo/probe.hpp"
#include "occo/synthetic.hpp"
#include "occo/train.hpp"
#include "support.hpp"

namespace occo {
namespace {

Eigen::MatrixXd blobs(std::size_t per_blob, double separation, Rng& rng, std::vector<int>& truth) {
  Eigen::MatrixXd x(2 * per_blob, 4);
  truth.assign(2 * per_blob, 0);
  for (std::size_t i = 0; i < 2 * per_blob; ++i) {
    const int b = i < per_blob ? 0 : 1;
    truth[i] = b;
    for (int d = 0; d < 4; ++d) x(static_cast<Eigen::Index>(i), d) = standard_normal(rng) + (d == 0 ? b * separation : 0.0);
  }
  return x;
}

double agreement_up_to_relabel(const std::vector<int>& a, const std::vector<int>& truth) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == truth[i];
  return std::max(same, a.size() - same) / static_cast<double>(a.size());
}

std::vector<int> random_labels(std::size_t n, int k, Rng& rng) {
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(k)));
  return v;
}

ModelDims tiny_dims() {
  ModelDims d;
  d.point_mlp_widths = {16, 16};
  d.embed_dim = 16;
  d.coarse_hidden = {16};
  d.n_coarse = 8;
  d.grid_side = 3;
  d.fold_mlp_widths = {8};
  return d;
}

TEST(KMeans, SeparatedBlobs) {
  Rng rng(1);
  std::vector<int> truth;
  const Eigen::MatrixXd x = blobs(200, 10.0, rng, truth);
  const KMeansResult r = kmeans(x, 2, 3);
  EXPECT_GE(agreement_up_to_relabel(r.clustering.labels, truth), 0.99);
  EXPECT_EQ(r.clustering.k, 2);
  EXPECT_EQ(r.centroids.rows(), 2);
}

TEST(KMeans, OneClusterPerItem) {
  Rng rng(2);
  std::vector<int> truth;
  const Eigen::MatrixXd x = blobs(6, 3.0, rng, truth);
  const KMeansResult r = kmeans(x, 12, 4);
  EXPECT_EQ(r.inertia, 0.0);
  std::vector<int> sorted = r.clustering.labels;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 12; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(KMeans, DuplicatedDataKeepsLloydFixedPoint) {
  Rng rng(3);
  std::vector<int> truth;
  const Eigen::MatrixXd x = blobs(50, 4.0, rng, truth);
  Eigen::MatrixXd twice(200, 4);
  twice << x, x;
  const Eigen::MatrixXd init = x.topRows(3);
  const KMeansResult a = lloyd(x, init), b = lloyd(twice, init);
  EXPECT_LT((a.centroids - b.centroids).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(b.inertia, 2 * a.inertia, 1e-9 * std::max(1.0, a.inertia));
}

TEST(KMeans, InertiaTraceIsNonIncreasing) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> truth;
    const Eigen::MatrixXd x = blobs(60, 1.0, rng, truth);
    const KMeansResult r = kmeans(x, 5, static_cast<std::uint64_t>(trial));
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1] * (1 + 1e-12));
    EXPECT_NEAR(r.trace.back(), r.inertia, 1e-9 * std::max(1.0, r.inertia));
    EXPECT_LT(r.restart, 10u);
  }
}

TEST(KMeans, DeterministicAcrossThreadsAndErrors) {
  Rng rng(5);
  std::vector<int> truth;
  const Eigen::MatrixXd x = blobs(80, 2.0, rng, truth);
  omp_set_num_threads(1);
  const KMeansResult a = kmeans(x, 4, 11);
  omp_set_num_threads(4);
  const KMeansResult b = kmeans(x, 4, 11);
  omp_set_num_threads(omp_get_num_procs());
  EXPECT_EQ(a.clustering.labels, b.clustering.labels);
  EXPECT_EQ(a.inertia, b.inertia);
  EXPECT_OCCO_ERROR(kmeans(x.topRows(3), 4, 1), ErrorCode::TooFewItems);
}

TEST(Ami, IdenticalAndPermuted) {
  Rng rng(6);
  const std::vector<int> a = random_labels(200, 5, rng);
  EXPECT_EQ(ami(a, a), 1.0);
  std::vector<int> relabeled = a;
  for (auto& x : relabeled) x = (x * 3 + 2) % 5 + 10;
  EXPECT_EQ(ami(a, relabeled), 1.0);
  EXPECT_EQ(ami(relabeled, a), 1.0);
}

TEST(Ami, RandomLabelingsAverageNearZero) {
  Rng rng(7);
  double sum = 0.0;
  for (int t = 0; t < 100; ++t) sum += ami(random_labels(200, 10, rng), random_labels(200, 10, rng));
  EXPECT_LT(std::abs(sum / 100.0), 0.05);
}

TEST(Ami, FrozenOracleValues) {
  // sklearn.metrics.adjusted_mutual_info_score (arithmetic mean) on the same
  // labelings.
  const std::vector<int> a{0, 0, 1, 1, 2, 2}, b{0, 0, 1, 2, 2, 2};
  EXPECT_NEAR(ami(a, b), 0.5023607027202738, 1e-12);
  EXPECT_NEAR(mutual_information(a, b), 0.7803552045207032, 1e-12);
  const std::vector<int> c{0, 0, 0, 1, 1, 1, 2, 2, 2, 3}, d{1, 1, 0, 0, 2, 2, 2, 3, 3, 3};
  EXPECT_NEAR(ami(c, d), 0.2662693564010161, 1e-12);
  const std::vector<int> x{2, 3, 0, 3, 1, 2, 2, 1, 3, 0, 1, 1, 2, 1, 0, 0, 0, 0, 0, 3,
                           0, 2, 3, 0, 1, 1, 1, 3, 0, 3, 3, 3, 0, 1, 2, 1, 2, 2, 2, 0};
  const std::vector<int> y{2, 3, 0, 3, 0, 2, 2, 1, 2, 0, 1, 1, 2, 1, 0, 0, 0, 0, 0, 3,
                           0, 1, 3, 0, 1, 1, 1, 1, 1, 3, 0, 3, 1, 1, 2, 1, 2, 2, 2, 0};
  EXPECT_NEAR(ami(x, y), 0.5635519773088511, 1e-12);
}

TEST(Ami, SymmetricBoundedAndErrors) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto n = 2 + uniform_index(rng, 60);
    const auto a = random_labels(n, 1 + static_cast<int>(uniform_index(rng, 6)), rng);
    const auto b = random_labels(n, 1 + static_cast<int>(uniform_index(rng, 6)), rng);
    const double v = ami(a, b);
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, ami(b, a), 1e-12);
  }
  const std::vector<int> one(10, 0);
  // Zero denominator (both labelings constant) is defined as 0.
  EXPECT_EQ(ami(one, one), 0.0);
  EXPECT_EQ(entropy(one), 0.0);
  EXPECT_OCCO_ERROR(ami(std::vector<int>{0, 1}, std::vector<int>{0}), ErrorCode::LengthMismatch);
}

TEST(Robustness, FourCumulativeRowsAndRepeatability) {
  const auto rows = cumulative_rows();
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(rows[r].size(), r);
  EXPECT_EQ(row_name(0), "none");
  EXPECT_EQ(row_name(3), "J+T+R");

  const Benchmark bench = make_benchmark(12, 3, 64, 1);
  std::vector<PointCloud> clouds;
  for (const auto& c : bench.train) clouds.push_back(c.cloud);
  Rng rng(9);
  const EncoderParams enc = encoder_of(init_params(tiny_dims(), rng));
  const auto a = robustness_probe(enc, clouds, rows, 5, 3);
  ASSERT_EQ(a.size(), 4u);
  for (const auto& row : a) {
    EXPECT_EQ(row.values.size(), 3u);
    EXPECT_GE(row.stderr_, 0.0);
    EXPECT_NEAR(row.mean, std::accumulate(row.values.begin(), row.values.end(), 0.0) / 3.0, 1e-12);
  }
  const std::vector<std::vector<TransformSpec>> identity_twice{{}, {}};
  const auto twice = robustness_probe(enc, clouds, identity_twice, 5, 3);
  EXPECT_EQ(twice[0].values, twice[1].values);
  EXPECT_EQ(twice[0].values, a[0].values);
}

TEST(Robustness, TransformDrawsAreShared) {
  const Benchmark bench = make_benchmark(6, 3, 32, 2);
  std::vector<PointCloud> clouds;
  for (const auto& c : bench.train) clouds.push_back(c.cloud);
  const auto rows = cumulative_rows();
  const auto j = transform_all(clouds, rows[1], 77);
  const auto jt = transform_all(clouds, rows[2], 77);
  // The jitter draw is the same in both rows, so J+T differs from J by one
  // rigid shift per cloud.
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    const Point3 shift = jt[i][0] - j[i][0];
    for (std::size_t p = 0; p < clouds[i].size(); ++p) EXPECT_LT(distance(jt[i][p] - j[i][p], shift), 1e-12);
  }
}

TEST(LinearProbe, SeparableIsPerfect) {
  Rng rng(10);
  std::vector<int> truth;
  const Eigen::MatrixXd x = blobs(50, 8.0, rng, truth);
  EXPECT_EQ(linear_probe(x, truth, x, truth), 1.0);
  std::vector<int> test_truth;
  const Eigen::MatrixXd t = blobs(50, 8.0, rng, test_truth);
  EXPECT_EQ(linear_probe(x, truth, t, test_truth), 1.0);
}

TEST(LinearProbe, MultiClass) {
  Rng rng(11);
  Eigen::MatrixXd x(90, 3);
  std::vector<int> y(90);
  for (int i = 0; i < 90; ++i) {
    y[static_cast<std::size_t>(i)] = i % 3;
    for (int d = 0; d < 3; ++d) x(i, d) = 0.3 * standard_normal(rng) + (d == i % 3 ? 5.0 : 0.0);
  }
  const ProbeModel m = fit_linear_probe(x, y);
  EXPECT_EQ(m.classes, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(accuracy(m.predict(x), y), 1.0);
}

TEST(LinearProbe, ShuffledLabelsGiveChance) {
  Rng rng(12);
  double sum = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<int> ytr, yte;
    const Eigen::MatrixXd tr = blobs(50, 0.0, rng, ytr), te = blobs(50, 0.0, rng, yte);
    for (std::size_t i = ytr.size() - 1; i > 0; --i) std::swap(ytr[i], ytr[uniform_index(rng, i + 1)]);
    sum += linear_probe(tr, ytr, te, yte);
  }
  EXPECT_NEAR(sum / 20.0, 0.5, 0.1);
}

TEST(LinearProbe, SingleClassIsRejected) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
  const std::vector<int> y(5, 1);
  EXPECT_OCCO_ERROR(fit_linear_probe(x, y), ErrorCode::SingleClass);
}

TEST(Masks, Examples) {
  std::vector<double> up(10);
  std::iota(up.begin(), up.end(), 0.0);
  EXPECT_EQ(activation_mask(up), (Mask{0, 0, 0, 0, 0, 0, 0, 0, 1, 1}));
  const std::vector<double> flat(10, 1.0);
  EXPECT_EQ(activation_mask(flat), (Mask{1, 1, 0, 0, 0, 0, 0, 0, 0, 0}));
  for (std::size_t n = 1; n < 200; ++n) {
    std::vector<double> a(n, 0.0);
    const Mask m = activation_mask(a);
    EXPECT_EQ(static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)), mask_size(n, 0.2));
    EXPECT_EQ(mask_size(n, 0.2), static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n) - 1e-9)));
  }
  EXPECT_EQ(mask_size(10, 0.2), 2u);
  EXPECT_EQ(mask_size(11, 0.2), 3u);
}

TEST(Dissection, MiouExamples) {
  const Mask m{1, 1, 0, 0}, c{1, 0, 1, 1}, z{0, 0, 1, 1};
  const auto same = dissection_miou({{m}}, {{m}});
  EXPECT_EQ(same(0, 0), 1.0);
  EXPECT_EQ(dissection_miou({{m}}, {{z}})(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(dissection_miou({{m}}, {{c}})(0, 0), 0.25);
  const Mask empty{0, 0, 0, 0};
  // Second object has an empty union and contributes 0 to the mean.
  EXPECT_DOUBLE_EQ(dissection_miou({{m, empty}}, {{m, empty}})(0, 0), 0.5);
  EXPECT_OCCO_ERROR(dissection_miou({{m}}, {{Mask{1, 0}}}), ErrorCode::MaskLengthMismatch);
}

TEST(Dissection, DetectionCounts) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_EQ(count_detected_concepts(z).total, 0u);
  z(1, 0) = 0.6;
  DetectionCounts c = count_detected_concepts(z);
  EXPECT_EQ(c.total, 1u);
  EXPECT_EQ(c.unique, 1u);
  EXPECT_EQ(c.per_concept, (std::vector<std::size_t>{1, 0}));
  z(1, 0) = 0.5;
  EXPECT_EQ(count_detected_concepts(z).total, 0u);
  z(0, 1) = 0.7;
  z(2, 1) = 0.9;
  c = count_detected_concepts(z);
  EXPECT_EQ(c.total, 2u);
  EXPECT_EQ(c.unique, 1u);
}

TEST(Dissection, EncoderLayers) {
  Rng rng(13);
  const EncoderParams enc = encoder_of(init_params(tiny_dims(), rng));
  std::vector<PartCloud> objects;
  for (int i = 0; i < 6; ++i) {
    const LabeledCloud lc = sample_labeled(random_shape(static_cast<ShapeClass>(i % 3), rng), 50, rng);
    objects.push_back({lc.cloud, lc.parts});
  }
  const auto layers = dissect(enc, objects, kPartCount);
  ASSERT_EQ(layers.size(), enc.encoder.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    EXPECT_EQ(layers[l].miou.rows(), enc.encoder[l].fan_out());
    EXPECT_EQ(layers[l].miou.cols(), kPartCount);
    EXPECT_GE(layers[l].miou.minCoeff(), 0.0);
    EXPECT_LE(layers[l].miou.maxCoeff(), 1.0);
  }
  objects[0].parts.pop_back();
  EXPECT_OCCO_ERROR(dissect(enc, objects, kPartCount), ErrorCode::MaskLengthMismatch);
}

class Landscape : public ::testing::Test {
 protected:
  static std::vector<CompletionSample> dataset() {
    GenerationConfig g;
    g.views_per_object = 1;
    g.n_input = 48;
    g.n_coarse = 8;
    g.n_fine = 72;
    g.seed = 3;
    return generate_dataset(synthetic_objects(3, 3), g).samples;
  }
};

TEST_F(Landscape, CenterEqualsLossAndDeterministic) {
  Rng rng(14);
  const ModelParams theta = init_params(tiny_dims(), rng);
  const auto data = dataset();
  const LandscapeSlice s = landscape_slice(theta, data, 5, 21, 0.5);
  ASSERT_EQ(s.values.rows(), 5);
  ASSERT_EQ(s.coords.size(), 5u);
  EXPECT_EQ(s.coords[0], -1.0);
  EXPECT_EQ(s.coords[2], 0.0);
  EXPECT_EQ(s.coords[4], 1.0);
  EXPECT_EQ(s.values(2, 2), dataset_loss(data, theta, 0.5));
  const LandscapeSlice again = landscape_slice(theta, data, 5, 21, 0.5);
  EXPECT_EQ(again.values, s.values);
  EXPECT_NE(landscape_slice(theta, data, 5, 22, 0.5).values, s.values);
  EXPECT_OCCO_ERROR(landscape_slice(theta, data, 4, 21, 0.5), ErrorCode::InvalidArgument);
  EXPECT_OCCO_ERROR(landscape_slice(theta, data, 1, 21, 0.5), ErrorCode::InvalidArgument);
}

TEST_F(Landscape, FilterNormalizedDirections) {
  Rng rng(15);
  ModelParams theta = init_params(tiny_dims(), rng);
  for (Dense* l : theta.layers())
    for (Eigen::Index r = 0; r < l->bias.size(); ++r) l->bias(r) = uniform(rng, -1, 1);
  theta.encoder[0].bias.setZero();
  Rng drng(16);
  const ModelParams d = filter_normalized_direction(theta, drng);
  const auto tl = theta.layers();
  const auto dl = d.layers();
  for (std::size_t l = 0; l < tl.size(); ++l) {
    for (Eigen::Index r = 0; r < tl[l]->weight.rows(); ++r)
      EXPECT_NEAR(dl[l]->weight.row(r).norm(), tl[l]->weight.row(r).norm(), 1e-9);
    EXPECT_NEAR(dl[l]->bias.norm(), tl[l]->bias.norm(), 1e-9);
  }
  EXPECT_EQ(d.encoder[0].bias.norm(), 0.0);
  EXPECT_EQ(offset_params(theta, d, d, 0.0, 0.0).flatten(), theta.flatten());
}

}  // namespace
}  // namespace occo
