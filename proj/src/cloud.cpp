// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "occo/error.hpp"

namespace occo {

void require_finite(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (!is_finite(cloud[i])) fail(ErrorCode::InvalidArgument, "non-finite coordinate at point " + std::to_string(i));
}

void validate(const TriMesh& mesh) {
  const auto nv = mesh.vertices.size();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (auto idx : face)
      if (idx >= nv) fail(ErrorCode::IndexOutOfRange, "face " + std::to_string(f) + " references vertex " + std::to_string(idx));
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
      fail(ErrorCode::NonTriangleFace, "face " + std::to_string(f) + " repeats a vertex");
  }
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) noexcept {
  return 0.5 * norm(cross(b - a, c - a));
}

SurfaceSample sample_mesh_faces(const TriMesh& mesh, std::size_t n, Rng& rng) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  validate(mesh);

  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    total += triangle_area(mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]);
    cumulative[f] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total)) fail(ErrorCode::DegenerateMesh, "mesh has zero total area");

  SurfaceSample out;
  out.cloud.points.reserve(n);
  out.face_index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    auto f = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                               static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
    // Zero-area faces share their cumulative value with the previous face and
    // are never selected by upper_bound.
    const Face& face = mesh.faces[f];
    const double r1 = std::sqrt(uniform01(rng));
    const double r2 = uniform01(rng);
    const Point3& a = mesh.vertices[face[0]];
    const Point3& b = mesh.vertices[face[1]];
    const Point3& c = mesh.vertices[face[2]];
    out.cloud.points.push_back((1.0 - r1) * a + (r1 * (1.0 - r2)) * b + (r1 * r2) * c);
    out.face_index.push_back(static_cast<std::uint32_t>(f));
  }
  return out;
}

PointCloud sample_mesh(const TriMesh& mesh, std::size_t n, Rng& rng) { return sample_mesh_faces(mesh, n, rng).cloud; }

Point3 centroid(std::span<const Point3> points) {
  Point3 c;
  for (const auto& p : points) c += p;
  if (!points.empty()) c *= 1.0 / static_cast<double>(points.size());
  return c;
}

PointCloud UnitSphereFrame::apply(const PointCloud& cloud) const {
  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(apply(p));
  return out;
}

UnitSphereFrame unit_sphere_frame(const PointCloud& cloud) {
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "cannot normalize an empty cloud");
  UnitSphereFrame frame;
  frame.center = centroid(cloud.points);
  double radius = 0.0;
  for (const auto& p : cloud.points) radius = std::max(radius, norm(p - frame.center));
  frame.scale = radius > 0.0 ? 1.0 / radius : 1.0;
  return frame;
}

PointCloud normalize_unit_sphere(const PointCloud& cloud) { return unit_sphere_frame(cloud).apply(cloud); }

TransformSpec TransformSpec::jitter(double sigma, double clip) {
  TransformSpec s;
  s.kind = TransformKind::Jitter;
  s.jitter_sigma = sigma;
  s.jitter_clip = clip;
  return s;
}

TransformSpec TransformSpec::translate(double range) {
  TransformSpec s;
  s.kind = TransformKind::Translate;
  s.translate_range = range;
  return s;
}

TransformSpec TransformSpec::rotate(std::optional<std::array<double, 3>> angles) {
  TransformSpec s;
  s.kind = TransformKind::Rotate;
  s.euler = angles;
  return s;
}

void validate(const TransformSpec& spec) {
  if (!(spec.jitter_sigma >= 0.0) || !(spec.jitter_clip >= 0.0) || !(spec.translate_range >= 0.0))
    fail(ErrorCode::InvalidArgument, "transform parameters must be non-negative");
}

PointCloud apply_transform(const PointCloud& cloud, const TransformSpec& spec, Rng& rng) {
  validate(spec);
  PointCloud out = cloud;
  switch (spec.kind) {
    case TransformKind::Jitter:
      for (auto& p : out.points) {
        for (double* c : {&p.x, &p.y, &p.z}) {
          const double noise = spec.jitter_sigma * standard_normal(rng);
          *c += std::clamp(noise, -spec.jitter_clip, spec.jitter_clip);
        }
      }
      break;
    case TransformKind::Translate: {
      Point3 shift;
      shift.x = uniform(rng, -spec.translate_range, spec.translate_range);
      shift.y = uniform(rng, -spec.translate_range, spec.translate_range);
      shift.z = uniform(rng, -spec.translate_range, spec.translate_range);
      for (auto& p : out.points) p += shift;
      break;
    }
    case TransformKind::Rotate: {
      std::array<double, 3> angles{};
      if (spec.euler) {
        angles = *spec.euler;
      } else {
        for (auto& a : angles) a = uniform(rng, 0.0, 2.0 * M_PI);
      }
      const Mat3 r = euler_rotation(angles[0], angles[1], angles[2]);
      for (auto& p : out.points) p = r.apply(p);
      break;
    }
  }
  return out;
}

}  // namespace occo
