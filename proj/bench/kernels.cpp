// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
//
// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "occo/delaunay.hpp"
#include "occo/losses.hpp"
#include "occo/occlusion.hpp"

namespace {

using namespace occo;

PointCloud gaussian_cloud(std::size_t n, Rng& rng) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({standard_normal(rng), standard_normal(rng), standard_normal(rng)});
  return c;
}

struct VisibilityInput {
  std::vector<CamPoint> points;
  std::vector<Face> faces;
};

VisibilityInput visibility_input(std::size_t n) {
  Rng rng(7);
  const PointCloud c = normalize_unit_sphere(gaussian_cloud(n, rng));
  VisibilityInput in;
  in.points = project_to_camera(c, sample_views(1, rng)[0]);
  in.faces = delaunay_2d(pixels_of(in.points)).faces;
  return in;
}

void BM_VisibilityZBuffer(benchmark::State& state) {
  const VisibilityInput in = visibility_input(static_cast<std::size_t>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(visibility_zbuffer(in.points, in.faces, kDefaultDepthEpsilon));
  omp_set_num_threads(omp_get_num_procs());
}

void BM_VisibilityReference(benchmark::State& state) {
  const VisibilityInput in = visibility_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(visibility_reference(in.points, in.faces, kDefaultDepthEpsilon));
}

void BM_Chamfer(benchmark::State& state) {
  Rng rng(8);
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud a = gaussian_cloud(n, rng), b = gaussian_cloud(n, rng);
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b));
  omp_set_num_threads(omp_get_num_procs());
}

void BM_ChamferBruteForce(benchmark::State& state) {
  Rng rng(8);
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud a = gaussian_cloud(n, rng), b = gaussian_cloud(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer_bruteforce(a, b));
}

void BM_Occlude(benchmark::State& state) {
  Rng rng(9);
  const PointCloud c = normalize_unit_sphere(gaussian_cloud(static_cast<std::size_t>(state.range(0)), rng));
  const ViewSpec v = sample_views(1, rng)[0];
  for (auto _ : state) benchmark::DoNotOptimize(occlude(c, v));
}

}  // namespace

BENCHMARK(BM_VisibilityZBuffer)->ArgsProduct({{256, 1024, 4096}, {1, 4}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VisibilityReference)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Chamfer)->ArgsProduct({{256, 1024, 4096}, {1, 4}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ChamferBruteForce)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Occlude)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
