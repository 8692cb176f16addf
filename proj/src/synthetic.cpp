// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/synthetic.hpp"

#include <cmath>

#include "occo/error.hpp"

namespace occo {
namespace {

constexpr int kSlices = 24;
constexpr int kStacks = 12;

std::uint32_t add_vertex(TriMesh& m, double x, double y, double z) {
  m.vertices.push_back({x, y, z});
  return static_cast<std::uint32_t>(m.vertices.size() - 1);
}

void add_face(PartMesh& s, std::uint32_t a, std::uint32_t b, std::uint32_t c, int part) {
  s.mesh.faces.push_back({a, b, c});
  s.face_parts.push_back(part);
}

PartMesh sphere() {
  PartMesh s;
  s.shape = ShapeClass::Sphere;
  const auto top = add_vertex(s.mesh, 0, 0, 1);
  for (int i = 1; i < kStacks; ++i) {
    const double th = M_PI * i / kStacks;
    for (int j = 0; j < kSlices; ++j) {
      const double ph = 2.0 * M_PI * j / kSlices;
      add_vertex(s.mesh, std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    }
  }
  const auto bottom = add_vertex(s.mesh, 0, 0, -1);
  auto ring = [](int i, int j) { return static_cast<std::uint32_t>(1 + (i - 1) * kSlices + (j % kSlices)); };
  for (int j = 0; j < kSlices; ++j) add_face(s, top, ring(1, j), ring(1, j + 1), 0);
  for (int i = 1; i + 1 < kStacks; ++i) {
    const int part = i < kStacks / 2 ? 0 : 1;
    for (int j = 0; j < kSlices; ++j) {
      add_face(s, ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), part);
      add_face(s, ring(i, j), ring(i + 1, j + 1), ring(i, j + 1), part);
    }
  }
  for (int j = 0; j < kSlices; ++j) add_face(s, bottom, ring(kStacks - 1, j + 1), ring(kStacks - 1, j), 1);
  return s;
}

PartMesh box() {
  PartMesh s;
  s.shape = ShapeClass::Box;
  for (int i = 0; i < 8; ++i) add_vertex(s.mesh, (i & 1) ? 1 : -1, (i & 2) ? 1 : -1, (i & 4) ? 1 : -1);
  // Quads as vertex quadruples; first two are the z caps.
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (int q = 0; q < 6; ++q) {
    const int part = q < 2 ? 2 : 3;
    const auto* v = quads[q];
    add_face(s, v[0], v[1], v[2], part);
    add_face(s, v[0], v[2], v[3], part);
  }
  return s;
}

PartMesh cylinder() {
  PartMesh s;
  s.shape = ShapeClass::Cylinder;
  const auto top = add_vertex(s.mesh, 0, 0, 1);
  const auto bottom = add_vertex(s.mesh, 0, 0, -1);
  for (int j = 0; j < kSlices; ++j) {
    const double ph = 2.0 * M_PI * j / kSlices;
    add_vertex(s.mesh, std::cos(ph), std::sin(ph), 1);
    add_vertex(s.mesh, std::cos(ph), std::sin(ph), -1);
  }
  auto up = [](int j) { return static_cast<std::uint32_t>(2 + 2 * (j % kSlices)); };
  auto lo = [](int j) { return static_cast<std::uint32_t>(3 + 2 * (j % kSlices)); };
  for (int j = 0; j < kSlices; ++j) {
    add_face(s, top, up(j), up(j + 1), 4);
    add_face(s, bottom, lo(j + 1), lo(j), 4);
    add_face(s, up(j), lo(j), lo(j + 1), 5);
    add_face(s, up(j), lo(j + 1), up(j + 1), 5);
  }
  return s;
}

}  // namespace

std::string to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::Sphere: return "sphere";
    case ShapeClass::Box: return "box";
    case ShapeClass::Cylinder: return "cylinder";
  }
  return "unknown";
}

PartMesh canonical_shape(ShapeClass c) {
  switch (c) {
    case ShapeClass::Sphere: return sphere();
    case ShapeClass::Box: return box();
    case ShapeClass::Cylinder: return cylinder();
  }
  fail(ErrorCode::InvalidArgument, "unknown shape class");
}

PartMesh random_shape(ShapeClass c, Rng& rng) {
  PartMesh s = canonical_shape(c);
  const double sx = uniform(rng, 0.7, 1.3), sy = uniform(rng, 0.7, 1.3), sz = uniform(rng, 0.7, 1.3);
  const double yaw = uniform(rng, 0.0, 2.0 * M_PI);
  const double pitch = uniform(rng, 0.0, 2.0 * M_PI);
  const double roll = uniform(rng, 0.0, 2.0 * M_PI);
  const Mat3 r = euler_rotation(yaw, pitch, roll);
  for (auto& v : s.mesh.vertices) v = r.apply({v.x * sx, v.y * sy, v.z * sz});
  return s;
}

LabeledCloud sample_labeled(const PartMesh& shape, std::size_t n, Rng& rng) {
  SurfaceSample sample = sample_mesh_faces(shape.mesh, n, rng);
  LabeledCloud out;
  out.cloud = normalize_unit_sphere(sample.cloud);
  out.cloud.label = static_cast<int>(shape.shape);
  out.parts.reserve(n);
  for (auto f : sample.face_index) out.parts.push_back(shape.face_parts[f]);
  return out;
}

Benchmark make_benchmark(std::size_t n_train, std::size_t n_test, std::size_t points, std::uint64_t seed) {
  Benchmark b;
  auto fill = [&](std::vector<LabeledCloud>& out, std::size_t count, std::string_view label) {
    for (std::size_t i = 0; i < count; ++i) {
      Rng rng = make_rng(seed, label, {i});
      const auto c = static_cast<ShapeClass>(i % kShapeClassCount);
      out.push_back(sample_labeled(random_shape(c, rng), points, rng));
    }
  };
  fill(b.train, n_train, "bench-train");
  fill(b.test, n_test, "bench-test");
  return b;
}

std::vector<ObjectSource> synthetic_objects(std::size_t count, std::uint64_t seed) {
  std::vector<ObjectSource> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, "synthetic-object", {i});
    const auto c = static_cast<ShapeClass>(i % kShapeClassCount);
    PartMesh s = random_shape(c, rng);
    out.push_back({to_string(c) + std::to_string(i), std::move(s.mesh), static_cast<int>(c)});
  }
  return out;
}

}  // namespace occo
