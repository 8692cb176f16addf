// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "occo/cloud.hpp"
#include "occo/dataset.hpp"
#include "occo/model.hpp"

namespace occo {

struct Clustering {
  std::vector<int> labels;
  int k = 0;
};

struct KMeansResult {
  Clustering clustering;
  Eigen::MatrixXd centroids;  // k x dim
  double inertia = 0.0;
  std::size_t restart = 0;
  std::vector<double> trace;  // inertia after each assignment of the kept restart
};

struct KMeansConfig {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

// Lloyd iterations from fixed initial centroids. Rows of `x` are items.
// Empty clusters keep their previous centroid.
KMeansResult lloyd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& initial, std::size_t max_iterations = 300);

// k-means++ seeding, restarts with derived seeds, lowest inertia kept (ties to
// the lowest restart). TooFewItems when k exceeds the item count.
KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed, const KMeansConfig& config = {});

// Adjusted mutual information with the hypergeometric expected MI and the
// arithmetic mean of entropies; 0 when the denominator vanishes.
double ami(std::span<const int> a, std::span<const int> b);
inline double ami(const Clustering& a, const Clustering& b) { return ami(a.labels, b.labels); }

double mutual_information(std::span<const int> a, std::span<const int> b);
double entropy(std::span<const int> labels);
double expected_mutual_information(std::span<const int> a, std::span<const int> b);

// Rows are embeddings of the given clouds.
Eigen::MatrixXd embed_all(std::span<const PointCloud> clouds, const EncoderParams& encoder);

struct RobustnessRow {
  std::string name;  // "none", "J", "J+T", "J+T+R"
  double mean = 0.0;
  double stderr_ = 0.0;
  std::vector<double> values;
};

// The four cumulative transform rows: none, J, J+T, J+T+R.
std::vector<std::vector<TransformSpec>> cumulative_rows(const TransformSpec& jitter = TransformSpec::jitter(),
                                                        const TransformSpec& translate = TransformSpec::translate(),
                                                        const TransformSpec& rotate = TransformSpec::rotate());
std::string row_name(std::size_t row);

std::vector<PointCloud> transform_all(std::span<const PointCloud> clouds, std::span<const TransformSpec> row,
                                      std::uint64_t seed);

/// For every row and seed: transform the labelled clouds, embed, cluster with
/// k = category count and score AMI against the labels. The transform and
/// clustering seeds do not depend on the encoder, so two encoders are
/// compared on identical draws. k = 0 uses the category count.
std::vector<RobustnessRow> robustness_probe(const EncoderParams& encoder, std::span<const PointCloud> clouds,
                                            std::span<const std::vector<TransformSpec>> rows, std::uint64_t seed,
                                            std::size_t seeds = 10, int k = 0);

struct ProbeConfig {
  std::size_t iterations = 1000;
  double learning_rate = 0.1;
  double l2 = 1e-3;
};

struct ProbeModel {
  std::vector<int> classes;
  Eigen::MatrixXd weights;  // classes x dim, on standardised features
  Eigen::VectorXd bias;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

// One-vs-rest hinge-loss linear classifiers on standardised features,
// trained by full-batch subgradient descent from zero. SingleClass when
// fewer than two classes appear in the training labels.
ProbeModel fit_linear_probe(const Eigen::MatrixXd& x, std::span<const int> y, const ProbeConfig& config = {});
double accuracy(std::span<const int> predicted, std::span<const int> truth);
double linear_probe(const Eigen::MatrixXd& train_x, std::span<const int> train_y, const Eigen::MatrixXd& test_x,
                    std::span<const int> test_y, const ProbeConfig& config = {});

using Mask = std::vector<std::uint8_t>;

// Marks the ceil(fraction * n) largest activations, ties to the lowest index.
Mask activation_mask(std::span<const double> activations, double fraction = 0.2);
std::size_t mask_size(std::size_t n, double fraction) noexcept;

// channel_masks[k][o] and concept_masks[c][o] are masks over object o's
// points. Result is channels x concepts.
Eigen::MatrixXd dissection_miou(const std::vector<std::vector<Mask>>& channel_masks,
                                const std::vector<std::vector<Mask>>& concept_masks);

struct DetectionCounts {
  std::size_t total = 0;   // (channel, concept) pairs above threshold
  std::size_t unique = 0;  // concepts detected by at least one channel
  std::vector<std::size_t> per_concept;
};

DetectionCounts count_detected_concepts(const Eigen::MatrixXd& miou, double threshold = 0.5);

struct PartCloud {
  PointCloud cloud;
  std::vector<int> parts;
};

struct LayerDissection {
  std::size_t layer = 0;
  Eigen::MatrixXd miou;  // channels x concepts
  DetectionCounts counts;
};

// Dissects every encoder layer's per-point channels against part concepts
// 0..concepts-1. MaskLengthMismatch when a part list does not match its cloud.
std::vector<LayerDissection> dissect(const EncoderParams& encoder, std::span<const PartCloud> objects, int concepts,
                                     double fraction = 0.2, double threshold = 0.5);

struct LandscapeSlice {
  int grid_side = 0;
  std::vector<double> coords;  // shared alpha/beta axis values
  Eigen::MatrixXd values;      // values(i, j) = f(coords[i], coords[j])
  std::uint64_t seed = 0;
  ModelParams delta;
  ModelParams eta;
};

// Gaussian direction with every weight row and every bias vector rescaled to
// the norm of the matching filter of `theta`.
ModelParams filter_normalized_direction(const ModelParams& theta, Rng& rng);

// theta + a * delta + b * eta, evaluated leaf by leaf.
ModelParams offset_params(const ModelParams& theta, const ModelParams& delta, const ModelParams& eta, double a,
                          double b);

/// Mean completion loss (at `alpha`) over the dataset on the plane through
/// theta spanned by two filter-normalised directions; grid_side odd >= 3.
LandscapeSlice landscape_slice(const ModelParams& theta, std::span<const CompletionSample> dataset, int grid_side,
                               std::uint64_t seed, double alpha);

}  // namespace occo
