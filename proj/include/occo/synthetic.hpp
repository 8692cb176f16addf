// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "occo/cloud.hpp"
#include "occo/dataset.hpp"
#include "occo/seed.hpp"

namespace occo {

enum class ShapeClass : int { Sphere = 0, Box = 1, Cylinder = 2 };
inline constexpr int kShapeClassCount = 3;

std::string to_string(ShapeClass c);

// Mesh plus one part id per face. Part ids are global across classes:
// sphere upper/lower half 0/1, box caps/sides 2/3, cylinder caps/side 4/5.
struct PartMesh {
  TriMesh mesh;
  std::vector<int> face_parts;
  ShapeClass shape = ShapeClass::Sphere;
};
inline constexpr int kPartCount = 6;

// Canonical shapes centred at the origin with unit extent along every axis.
PartMesh canonical_shape(ShapeClass c);

// Canonical shape with per-axis scale drawn from [0.7, 1.3] and a uniform
// random Euler rotation.
PartMesh random_shape(ShapeClass c, Rng& rng);

struct LabeledCloud {
  PointCloud cloud;        // unit-sphere normalised, label = class id
  std::vector<int> parts;  // per point
};

LabeledCloud sample_labeled(const PartMesh& shape, std::size_t n, Rng& rng);

struct Benchmark {
  std::vector<LabeledCloud> train;
  std::vector<LabeledCloud> test;
};

// Classes cycle sphere, box, cylinder so every split is balanced.
Benchmark make_benchmark(std::size_t n_train, std::size_t n_test, std::size_t points, std::uint64_t seed);

// Pre-training sources: `count` random shapes, classes cycling.
std::vector<ObjectSource> synthetic_objects(std::size_t count, std::uint64_t seed);

}  // namespace occo
