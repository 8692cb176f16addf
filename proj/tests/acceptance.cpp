// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// if any criterion fails.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "occo/checkpoint.hpp"
#include "occo/dataset.hpp"
#include "occo/delaunay.hpp"
#include "occo/losses.hpp"
#include "occo/model.hpp"
#include "occo/occlusion.hpp"
#include "occo/probe.hpp"
#include "occo/synthetic.hpp"
#include "occo/train.hpp"

namespace {

using namespace occo;
namespace fs = std::filesystem;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

PointCloud gaussian_cloud(std::size_t n, Rng& rng) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({standard_normal(rng), standard_normal(rng), standard_normal(rng)});
  return c;
}

// Andrew's monotone chain; collinear hull points dropped.
std::size_t hull_size(std::vector<Vec2> p) {
  std::sort(p.begin(), p.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  return k - 1;
}

// Brute-force empty-circumcircle check in long double.
bool circumcircles_empty(const TriMesh& t, const std::vector<Vec2>& pts) {
  for (const Face& f : t.faces) {
    const long double ax = pts[f[0]].x, ay = pts[f[0]].y, bx = pts[f[1]].x, by = pts[f[1]].y;
    const long double cx = pts[f[2]].x, cy = pts[f[2]].y;
    const long double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    const long double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                            (cx * cx + cy * cy) * (ay - by)) / d;
    const long double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                            (cx * cx + cy * cy) * (bx - ax)) / d;
    const long double r = std::hypot(ax - ux, ay - uy);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == f[0] || i == f[1] || i == f[2]) continue;
      if (std::hypot(pts[i].x - ux, pts[i].y - uy) < r * (1 - 1e-9L)) return false;
    }
  }
  return true;
}

// Delaunay faces of the nearer half of the points, so many points are hidden.
std::vector<Face> near_half_faces(const std::vector<CamPoint>& pts) {
  std::vector<std::uint32_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a].depth < pts[b].depth; });
  order.resize(pts.size() / 2);
  std::vector<Vec2> px;
  for (auto i : order) px.push_back(pts[i].pixel());
  std::vector<Face> faces;
  for (const Face& f : delaunay_2d(px).faces) faces.push_back({order[f[0]], order[f[1]], order[f[2]]});
  return faces;
}

Outcome occlusion_oracle() {
  Rng rng(101);
  std::size_t hidden = 0, points = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(3 + uniform_index(rng, 298));
    const PointCloud c = normalize_unit_sphere(gaussian_cloud(n, rng));
    const ViewSpec view = sample_views(1, rng)[0];
    if (view.intrinsics.focal != 1000.0 || view.intrinsics.width != 1600.0 || view.intrinsics.height != 1200.0)
      return {false, "views do not use f=1000, w=1600, h=1200"};
    const auto pts = project_to_camera(c, view);
    for (const auto& faces : {delaunay_2d(pixels_of(pts)).faces, near_half_faces(pts)}) {
      const VisibilityMask a = visibility_zbuffer(pts, faces, kDefaultDepthEpsilon);
      if (a != visibility_reference(pts, faces, kDefaultDepthEpsilon))
        return {false, "mismatch on cloud " + std::to_string(trial)};
      hidden += static_cast<std::size_t>(std::count(a.begin(), a.end(), 0));
      points += a.size();
    }
  }
  return {true, "500 clouds, 1000 face sets identical; " + std::to_string(hidden) + " of " + std::to_string(points) +
                    " point tests hidden"};
}

Outcome projection_round_trip() {
  Rng rng(102);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::size_t>(1 + uniform_index(rng, 300));
    const PointCloud c = normalize_unit_sphere(gaussian_cloud(n, rng));
    const ViewSpec v = sample_views(1, rng)[0];
    const PointCloud back = unproject(project_to_camera(c, v), v);
    for (std::size_t p = 0; p < c.size(); ++p)
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(back[p][k] - c[p][k]));
  }
  return {worst < 1e-9, fmt("max error %.3g over 1000 pairs", worst)};
}

Outcome delaunay_validity() {
  Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(3 + uniform_index(rng, 298));
    std::vector<Vec2> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({uniform(rng, 0, 1600), uniform(rng, 0, 1200)});
    const TriMesh t = delaunay_2d(p);
    if (t.faces.size() != 2 * n - 2 - hull_size(p)) return {false, "Euler relation fails on set " + std::to_string(trial)};
    if (!circumcircles_empty(t, p)) return {false, "non-empty circumcircle on set " + std::to_string(trial)};
  }
  return {true, "200 sets: Euler relation and empty circumcircles hold"};
}

Outcome chamfer_and_gradients() {
  Rng rng(104);
  double worst_value = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + uniform_index(rng, 512), m = 1 + uniform_index(rng, 512);
    const PointCloud a = gaussian_cloud(n, rng), b = gaussian_cloud(m, rng);
    const double fast = chamfer(a, b, false).value, slow = chamfer_bruteforce(a, b, false).value;
    worst_value = std::max(worst_value, std::abs(fast - slow) / std::max(slow, 1e-300));
  }

  ModelDims d;
  d.point_mlp_widths = {8, 8};
  d.embed_dim = 6;
  d.coarse_hidden = {8};
  d.n_coarse = 4;
  d.grid_side = 2;
  d.fold_mlp_widths = {5};
  const double h = 1e-6;
  double worst_grad = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r(1000 + seed);
    ModelParams p = init_params(d, r);
    // Nonzero biases keep pre-activations off the ReLU kink.
    for (Dense* l : p.layers())
      for (Eigen::Index k = 0; k < l->bias.size(); ++k) l->bias(k) = uniform(r, -0.1, 0.1);
    CompletionSample s;
    s.occluded = gaussian_cloud(32, r);
    s.coarse = gaussian_cloud(4, r);
    s.fine = gaussian_cloud(16, r);
    const std::vector<double> flat = p.flatten();
    const std::vector<double> grad = backward_weighted(s, p, forward(s.occluded, p), 0.5).grads.flatten();
    ModelParams q = p;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      std::vector<double> f = flat;
      f[k] += h;
      q.unflatten(f);
      const double lp = evaluate(s, q, 0.5).value;
      f[k] -= 2 * h;
      q.unflatten(f);
      const double lm = evaluate(s, q, 0.5).value;
      const double fd = (lp - lm) / (2 * h);
      worst_grad = std::max(worst_grad, std::abs(fd - grad[k]) / std::max(1e-6, std::abs(fd) + std::abs(grad[k])));
      ++checked;
    }
  }
  return {worst_value <= 1e-12 && worst_grad < 1e-4,
          fmt("CD worst rel. diff %.3g over 1000 pairs; ", worst_value) +
              fmt("gradient worst rel. err %.3g over %.0f parameters", worst_grad, static_cast<double>(checked))};
}

Outcome emd_gap() {
  Rng rng(105);
  double worst = -1.0;
  for (int trial = 0; trial < 500; ++trial) {
    const PointCloud a = gaussian_cloud(12, rng), b = gaussian_cloud(12, rng);
    worst = std::max(worst, emd_auction(a.points, b.points).cost - emd_exact(a.points, b.points).cost);
  }
  return {worst <= 1e-6, fmt("worst auction - Hungarian gap %.3g over 500 pairs", worst)};
}

Outcome schedules() {
  const std::uint64_t steps[] = {0, 10000, 20000, 50000};
  const double alphas[] = {0.01, 0.1, 0.5, 1.0};
  for (int i = 0; i < 4; ++i)
    if (alpha_schedule(steps[i]) != alphas[i]) return {false, "alpha_schedule wrong at step " + std::to_string(steps[i])};
  const TrainConfig c;
  for (std::size_t e = 0; e < 100; ++e) {
    const double expected = 1e-4 * std::pow(0.7, static_cast<double>(e / 10));
    if (lr_schedule(e, c) != expected) return {false, "lr_schedule wrong at epoch " + std::to_string(e)};
  }
  // Decimal values of the first plateaus, to within one rounding.
  const double decimal[] = {1e-4, 7e-5, 4.9e-5, 3.43e-5, 2.401e-5};
  for (std::size_t k = 0; k < 5; ++k)
    if (std::abs(lr_schedule(10 * k, c) - decimal[k]) > 2e-16 * decimal[k])
      return {false, "lr plateau " + std::to_string(k) + " off its decimal value"};
  return {true, "alpha 0.01/0.1/0.5/1.0 and lr 1e-4*0.7^floor(e/10) for e < 100"};
}

// Shared state built by the smoke run and reused by the landscape check.
struct Smoke {
  std::vector<CompletionSample> data;
  TrainResult result;
};
std::optional<Smoke> smoke_state;

Outcome training_smoke() {
  GenerationConfig g;
  g.views_per_object = 1;
  g.n_input = 256;
  g.n_coarse = 64;
  g.n_fine = 1024;
  g.seed = 1;
  std::vector<CompletionSample> data = generate_dataset(synthetic_objects(20, 1), g).samples;
  round_to_float(data);
  TrainConfig c;
  c.batch_size = 8;
  c.epochs = 1000;
  c.max_steps = 200;
  c.seed = 3;
  const ModelDims d;
  Rng rng = make_rng(c.seed, "init");
  const double before = dataset_chamfer(data, init_params(d, rng)).cd_fine;
  TrainResult a = pretrain(data, d, c);
  const TrainResult b = pretrain(data, d, c);
  const double after = dataset_chamfer(data, a.params).cd_fine;
  const bool same = a.params.flatten() == b.params.flatten() && log_csv(a.log) == log_csv(b.log);
  bool finite = true;
  for (const auto& r : a.log) finite = finite && std::isfinite(r.loss);
  const double ratio = after / before;
  smoke_state = Smoke{std::move(data), std::move(a)};
  return {ratio <= 0.5 && same && finite,
          fmt("fine CD %.4f -> %.4f", before, after) + fmt(" (ratio %.3f, need <= 0.5)", ratio) +
              ", rerun bit-identical: " + (same ? "yes" : "no")};
}

// Pre-trained and random-init encoders per seed, shared by transfer and AMI.
struct TransferSeed {
  EncoderParams occo, random;
  Benchmark bench;
};
std::vector<TransferSeed> transfer_state;

constexpr int kTransferSeeds = 5;

void build_transfer_state() {
  for (int s = 0; s < kTransferSeeds; ++s) {
    GenerationConfig g;
    g.views_per_object = 4;
    g.n_input = 256;
    g.n_coarse = 64;
    g.n_fine = 1024;
    g.seed = static_cast<std::uint64_t>(200 + s);
    std::vector<CompletionSample> data = generate_dataset(synthetic_objects(30, static_cast<std::uint64_t>(100 + s)), g).samples;
    round_to_float(data);
    TrainConfig c;
    c.lr0 = 1e-3;
    c.batch_size = 8;
    c.epochs = 100000;
    c.max_steps = 700;
    c.seed = static_cast<std::uint64_t>(300 + s);
    const ModelDims d;
    const TrainResult r = pretrain(data, d, c);
    // Random baseline is the same initialisation the pre-training started from.
    Rng rng = make_rng(c.seed, "init");
    transfer_state.push_back({encoder_of(r.params), encoder_of(init_params(d, rng)),
                              make_benchmark(60, 30, 256, static_cast<std::uint64_t>(400 + s))});
  }
}

void split(const Benchmark& b, std::vector<PointCloud>& tr, std::vector<int>& ytr, std::vector<PointCloud>& te,
           std::vector<int>& yte) {
  for (const auto& x : b.train) {
    tr.push_back(x.cloud);
    ytr.push_back(*x.cloud.label);
  }
  for (const auto& x : b.test) {
    te.push_back(x.cloud);
    yte.push_back(*x.cloud.label);
  }
}

Outcome transfer() {
  build_transfer_state();
  double occo_acc = 0.0, random_acc = 0.0;
  std::string per_seed;
  for (const auto& t : transfer_state) {
    std::vector<PointCloud> tr, te;
    std::vector<int> ytr, yte;
    split(t.bench, tr, ytr, te, yte);
    const double a = linear_probe(embed_all(tr, t.occo), ytr, embed_all(te, t.occo), yte);
    const double b = linear_probe(embed_all(tr, t.random), ytr, embed_all(te, t.random), yte);
    occo_acc += a / kTransferSeeds;
    random_acc += b / kTransferSeeds;
    per_seed += fmt(" %.3f/%.3f", a, b);
  }
  const double gap = 100.0 * (occo_acc - random_acc);
  return {gap >= 10.0, fmt("probe accuracy OcCo %.3f vs random %.3f", occo_acc, random_acc) +
                           fmt(", gap %.1f points (need >= 10); per seed OcCo/random:", gap) + per_seed};
}

Outcome ami_behavior() {
  Rng rng(106);
  std::vector<int> a(200);
  for (auto& x : a) x = static_cast<int>(uniform_index(rng, 10));
  const bool identical = ami(a, a) == 1.0;
  double mean = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<int> x(200), y(200);
    for (auto& v : x) v = static_cast<int>(uniform_index(rng, 10));
    for (auto& v : y) v = static_cast<int>(uniform_index(rng, 10));
    mean += ami(x, y) / 100.0;
  }
  if (transfer_state.empty()) build_transfer_state();
  const auto rows = cumulative_rows();
  std::vector<double> occo_rows(rows.size(), 0.0), random_rows(rows.size(), 0.0);
  for (std::size_t s = 0; s < transfer_state.size(); ++s) {
    std::vector<PointCloud> all, te;
    std::vector<int> ytr, yte;
    split(transfer_state[s].bench, all, ytr, te, yte);
    all.insert(all.end(), te.begin(), te.end());
    const auto o = robustness_probe(transfer_state[s].occo, all, rows, 700 + s, 10, 3);
    const auto r = robustness_probe(transfer_state[s].random, all, rows, 700 + s, 10, 3);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      occo_rows[k] += o[k].mean / static_cast<double>(transfer_state.size());
      random_rows[k] += r[k].mean / static_cast<double>(transfer_state.size());
    }
  }
  bool ordered = true;
  std::string table;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ordered = ordered && occo_rows[k] >= random_rows[k];
    table += " " + row_name(k) + fmt(" %.3f/%.3f", occo_rows[k], random_rows[k]);
  }
  return {identical && std::abs(mean) < 0.05 && ordered,
          std::string("identical->1: ") + (identical ? "yes" : "no") + fmt(", random mean %.4f", mean) +
              "; OcCo/random AMI by row:" + table};
}

Outcome dissection() {
  for (std::size_t n = 1; n <= 50; ++n) {
    std::vector<double> acts(n);
    for (std::size_t i = 0; i < n; ++i) acts[i] = std::sin(static_cast<double>(i) * 1.7);
    const Mask m = activation_mask(acts);
    const auto expected = (n + 4) / 5;  // ceil(0.2 n) in integers
    if (static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)) != expected)
      return {false, "mask cardinality wrong at n = " + std::to_string(n)};
  }
  const Mask m{1, 1, 0, 0, 1}, disjoint{0, 0, 1, 1, 0};
  if (dissection_miou({{m}}, {{m}})(0, 0) != 1.0) return {false, "identical masks do not give 1"};
  if (dissection_miou({{m}}, {{disjoint}})(0, 0) != 0.0) return {false, "disjoint masks do not give 0"};
  Eigen::MatrixXd miou(3, 3);
  miou << 0.5, 0.51, 0.0,  //
      0.9, 0.2, 0.5,       //
      0.49, 0.7, 0.5000001;
  const DetectionCounts c = count_detected_concepts(miou);
  const std::vector<std::size_t> per{1, 2, 1};
  if (c.total != 4 || c.unique != 3 || c.per_concept != per) return {false, "strict > 0.5 counting wrong"};
  return {true, "cardinality ceil(0.2n) for n = 1..50, mIoU 1/0, strict counting 4 detections / 3 concepts"};
}

Outcome landscape() {
  if (!smoke_state) training_smoke();
  const fs::path path = fs::temp_directory_path() / ("occo_acceptance_" + std::to_string(::getpid()) + ".ocwt");
  save_checkpoint(path, smoke_state->result.params, smoke_state->result.state);
  const Checkpoint ck = load_checkpoint(path);
  fs::remove(path);
  const double alpha = alpha_schedule(ck.train->global_step);
  const double loss = dataset_loss(smoke_state->data, ck.params, alpha);
  const LandscapeSlice s = landscape_slice(ck.params, smoke_state->data, 5, 9, alpha);
  const double center = s.values(2, 2);
  double worst = 0.0;
  const auto theta = ck.params.layers();
  for (const ModelParams* dir : {&s.delta, &s.eta}) {
    const auto layers = const_cast<ModelParams*>(dir)->layers();
    for (std::size_t l = 0; l < theta.size(); ++l) {
      for (Eigen::Index r = 0; r < theta[l]->weight.rows(); ++r)
        worst = std::max(worst, std::abs(layers[l]->weight.row(r).norm() - theta[l]->weight.row(r).norm()));
      worst = std::max(worst, std::abs(layers[l]->bias.norm() - theta[l]->bias.norm()));
    }
  }
  // Informational: is the centre the lowest node among the outer ring?
  double outer_min = INFINITY;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (std::abs(s.coords[static_cast<std::size_t>(i)]) >= 0.5 && std::abs(s.coords[static_cast<std::size_t>(j)]) >= 0.5)
        outer_min = std::min(outer_min, s.values(i, j));
  const double diff = std::abs(center - loss);
  return {diff <= 1e-12 && worst <= 1e-9,
          fmt("|f(0,0) - checkpoint loss| = %.3g, worst filter-norm diff %.3g", diff, worst) +
              fmt("; f(0,0) %.4f vs outer-ring min %.4f", center, outer_min)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"occlusion-oracle-equivalence", occlusion_oracle},
      {"projection-round-trip", projection_round_trip},
      {"delaunay-validity", delaunay_validity},
      {"chamfer-oracle-and-gradients", chamfer_and_gradients},
      {"emd-auction-gap", emd_gap},
      {"schedules", schedules},
      {"training-smoke", training_smoke},
      {"transfer-linear-probe", transfer},
      {"ami-behavior", ami_behavior},
      {"dissection", dissection},
      {"landscape", landscape},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
