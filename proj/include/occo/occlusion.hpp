// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occo/cloud.hpp"
#include "occo/predicates.hpp"

namespace occo {

struct CameraIntrinsics {
  double focal = 1000.0;
  double skew = 0.0;
  double width = 1600.0;
  double height = 1200.0;
};

struct RigidPose {
  Mat3 rotation;
  Point3 translation;
};

/// One occlusion viewpoint. After the rigid motion the object is pushed by
/// `standoff` along +z so depths stay positive for a unit-ball object; the
/// push is undone on unprojection.
struct ViewSpec {
  CameraIntrinsics intrinsics;
  RigidPose pose;
  double standoff = 3.0;
};

void validate(const ViewSpec& view);

struct CamPoint {
  double x_cam = 0.0;
  double y_cam = 0.0;
  double z_cam = 0.0;
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
  std::uint32_t source_index = 0;

  Vec2 pixel() const noexcept { return {u, v}; }
};

// 1 = visible, 0 = hidden; one entry per camera point.
using VisibilityMask = std::vector<std::uint8_t>;

struct OccludedView {
  PointCloud cloud;
  VisibilityMask visible_mask;
  ViewSpec view;
};

inline constexpr double kDefaultDepthEpsilon = 1e-4;
inline constexpr double kBarycentricTolerance = 1e-9;

std::vector<CamPoint> project_to_camera(const PointCloud& cloud, const ViewSpec& view);
PointCloud unproject(std::span<const CamPoint> points, const ViewSpec& view);

std::vector<Vec2> pixels_of(std::span<const CamPoint> points);

/// True when the triangle (a, b, c) covers q's pixel (barycentric coordinates
/// all >= -kBarycentricTolerance, inside the triangle's padded pixel box) and
/// its depth there is nearer than q.depth - eps_depth. Depth is the triangle's
/// 3D plane along q's viewing ray, i.e. inverse depth interpolated linearly
/// in pixel space. Shared by every visibility kernel.
bool covers_nearer(const CamPoint& a, const CamPoint& b, const CamPoint& c, const CamPoint& q, double eps_depth) noexcept;

/// Point i is hidden iff a face not incident to i covers it nearer (see
/// covers_nearer). Faces index into `points`. Uniform-grid binning over the
/// faces, OpenMP-parallel over points.
VisibilityMask visibility_zbuffer(std::span<const CamPoint> points, std::span<const Face> faces, double eps_depth);

// Same contract as visibility_zbuffer as a plain serial all-pairs scan.
VisibilityMask visibility_reference(std::span<const CamPoint> points, std::span<const Face> faces, double eps_depth);

/// Visibility of a full cloud from one camera. Points are visited front to
/// back and inserted into an incremental Delaunay triangulation of their
/// pixels as they survive; each point is tested against the surface
/// triangulated from the nearer survivors, so a later point is hidden when
/// that surface covers it nearer (covers_nearer). Coincident pixels merge.
VisibilityMask front_to_back_visibility(std::span<const CamPoint> points, double eps_depth);

/// Project, determine visibility, keep survivors and map them back to the
/// world frame.
OccludedView occlude(const PointCloud& cloud, const ViewSpec& view, double eps_depth = kDefaultDepthEpsilon);

/// V views with yaw, pitch and roll each uniform on [0, 2pi), zero
/// translation, the given intrinsics and standoff.
std::vector<ViewSpec> sample_views(std::size_t count, Rng& rng, const CameraIntrinsics& intrinsics = {},
                                   double standoff = 3.0);

}  // namespace occo
