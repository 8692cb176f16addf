// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "occo/geometry.hpp"
#include "occo/seed.hpp"

namespace occo {

struct PointCloud {
  std::vector<Point3> points;
  std::optional<int> label;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const Point3& operator[](std::size_t i) const noexcept { return points[i]; }
  Point3& operator[](std::size_t i) noexcept { return points[i]; }
};

using Face = std::array<std::uint32_t, 3>;

struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<Face> faces;
};

// Throws InvalidArgument when a coordinate is NaN/Inf.
void require_finite(const PointCloud& cloud);

// Checks face indices and distinctness; throws IndexOutOfRange / NonTriangleFace.
void validate(const TriMesh& mesh);

double triangle_area(const Point3& a, const Point3& b, const Point3& c) noexcept;

/// Area-weighted uniform surface sampling. Also reports the face each sample
/// landed on so per-face attributes (part ids) can follow the points.
struct SurfaceSample {
  PointCloud cloud;
  std::vector<std::uint32_t> face_index;
};

SurfaceSample sample_mesh_faces(const TriMesh& mesh, std::size_t n, Rng& rng);
PointCloud sample_mesh(const TriMesh& mesh, std::size_t n, Rng& rng);

// Centering + isotropic scale that maps a cloud into the unit ball.
struct UnitSphereFrame {
  Point3 center;
  double scale = 1.0;  // multiply after centering

  Point3 apply(const Point3& p) const noexcept { return (p - center) * scale; }
  PointCloud apply(const PointCloud& cloud) const;
};

UnitSphereFrame unit_sphere_frame(const PointCloud& cloud);
PointCloud normalize_unit_sphere(const PointCloud& cloud);

Point3 centroid(std::span<const Point3> points);

enum class TransformKind { Jitter, Translate, Rotate };

struct TransformSpec {
  TransformKind kind = TransformKind::Jitter;
  double jitter_sigma = 0.01;
  double jitter_clip = 0.05;
  double translate_range = 0.2;
  // yaw, pitch, roll in radians; sampled uniformly on [0, 2pi) when empty.
  std::optional<std::array<double, 3>> euler;

  static TransformSpec jitter(double sigma = 0.01, double clip = 0.05);
  static TransformSpec translate(double range = 0.2);
  static TransformSpec rotate(std::optional<std::array<double, 3>> angles = std::nullopt);
};

void validate(const TransformSpec& spec);

PointCloud apply_transform(const PointCloud& cloud, const TransformSpec& spec, Rng& rng);

}  // namespace occo
