// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "occo/delaunay.hpp"
#include "occo/error.hpp"

namespace occo {
namespace {

struct Box {
  double x0, y0, x1, y1;
};

// Pixel bounding box of a triangle, padded so that every pixel accepted by the
// barycentric tolerance lies inside it. The grid kernel bins on this box.
Box padded_box(const CamPoint& a, const CamPoint& b, const CamPoint& c) noexcept {
  Box box{std::min({a.u, b.u, c.u}), std::min({a.v, b.v, c.v}), std::max({a.u, b.u, c.u}), std::max({a.v, b.v, c.v})};
  const double pad = 1e-7 * (std::max(box.x1 - box.x0, box.y1 - box.y0) + 1.0);
  box.x0 -= pad;
  box.y0 -= pad;
  box.x1 += pad;
  box.y1 += pad;
  return box;
}

bool incident(const Face& f, std::uint32_t i) noexcept { return f[0] == i || f[1] == i || f[2] == i; }

class FaceGrid {
 public:
  FaceGrid(std::span<const CamPoint> points, std::span<const Face> faces) {
    if (faces.empty()) return;
    boxes_.reserve(faces.size());
    for (const Face& f : faces) boxes_.push_back(padded_box(points[f[0]], points[f[1]], points[f[2]]));
    x0_ = y0_ = INFINITY;
    double x1 = -INFINITY, y1 = -INFINITY;
    for (const Box& b : boxes_) {
      x0_ = std::min(x0_, b.x0);
      y0_ = std::min(y0_, b.y0);
      x1 = std::max(x1, b.x1);
      y1 = std::max(y1, b.y1);
    }
    nx_ = ny_ = std::max<long>(1, std::lround(std::ceil(std::sqrt(static_cast<double>(faces.size())))));
    cw_ = (x1 - x0_) / static_cast<double>(nx_);
    ch_ = (y1 - y0_) / static_cast<double>(ny_);
    if (!(cw_ > 0.0)) cw_ = 1.0;
    if (!(ch_ > 0.0)) ch_ = 1.0;
    cells_.resize(static_cast<std::size_t>(nx_ * ny_));
    for (std::size_t f = 0; f < boxes_.size(); ++f) {
      const Box& b = boxes_[f];
      for (long cy = cell_y(b.y0); cy <= cell_y(b.y1); ++cy)
        for (long cx = cell_x(b.x0); cx <= cell_x(b.x1); ++cx)
          cells_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(static_cast<std::uint32_t>(f));
    }
  }

  std::span<const std::uint32_t> candidates(double u, double v) const {
    if (cells_.empty()) return {};
    return cells_[static_cast<std::size_t>(cell_y(v) * nx_ + cell_x(u))];
  }

 private:
  long cell_x(double u) const { return std::clamp<long>(static_cast<long>(std::floor((u - x0_) / cw_)), 0, nx_ - 1); }
  long cell_y(double v) const { return std::clamp<long>(static_cast<long>(std::floor((v - y0_) / ch_)), 0, ny_ - 1); }

  std::vector<Box> boxes_;
  std::vector<std::vector<std::uint32_t>> cells_;
  double x0_ = 0.0, y0_ = 0.0, cw_ = 1.0, ch_ = 1.0;
  long nx_ = 1, ny_ = 1;
};

void check_faces(std::span<const CamPoint> points, std::span<const Face> faces) {
  for (const Face& f : faces)
    for (auto idx : f)
      if (idx >= points.size()) fail(ErrorCode::IndexOutOfRange, "face references camera point " + std::to_string(idx));
}

}  // namespace

void validate(const ViewSpec& view) {
  const auto& k = view.intrinsics;
  if (!(k.focal > 0.0) || !std::isfinite(k.focal)) fail(ErrorCode::SingularIntrinsics, "focal length must be positive");
  if (!(k.width > 0.0) || !(k.height > 0.0)) fail(ErrorCode::InvalidArgument, "image size must be positive");
  if (!std::isfinite(k.skew)) fail(ErrorCode::InvalidArgument, "skew must be finite");
  if (!(view.standoff > 0.0)) fail(ErrorCode::InvalidArgument, "standoff must be positive");
  const Mat3& r = view.pose.rotation;
  const Mat3 rtr = r.transposed() * r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::fabs(rtr(i, j) - (i == j ? 1.0 : 0.0)) > 1e-9) fail(ErrorCode::InvalidArgument, "rotation is not orthonormal");
  if (std::fabs(r.determinant() - 1.0) > 1e-9) fail(ErrorCode::InvalidArgument, "rotation determinant is not 1");
}

std::vector<CamPoint> project_to_camera(const PointCloud& cloud, const ViewSpec& view) {
  validate(view);
  if (cloud.empty()) fail(ErrorCode::EmptyCloud, "cannot project an empty cloud");
  const auto& k = view.intrinsics;
  const double cx = 0.5 * k.width, cy = 0.5 * k.height;
  std::vector<CamPoint> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    Point3 q = view.pose.rotation.apply(cloud[i]) + view.pose.translation;
    q.z += view.standoff;
    CamPoint& cp = out[i];
    cp.x_cam = k.focal * q.x + k.skew * q.y + cx * q.z;
    cp.y_cam = k.focal * q.y + cy * q.z;
    cp.z_cam = q.z;
    if (!(cp.z_cam > 0.0))
      fail(ErrorCode::NonPositiveDepth, "point " + std::to_string(i) + " has depth " + std::to_string(cp.z_cam));
    cp.u = cp.x_cam / cp.z_cam;
    cp.v = cp.y_cam / cp.z_cam;
    cp.depth = cp.z_cam;
    cp.source_index = static_cast<std::uint32_t>(i);
  }
  return out;
}

PointCloud unproject(std::span<const CamPoint> points, const ViewSpec& view) {
  validate(view);
  const auto& k = view.intrinsics;
  const double cx = 0.5 * k.width, cy = 0.5 * k.height;
  PointCloud out;
  out.points.reserve(points.size());
  for (const CamPoint& cp : points) {
    if (!(cp.z_cam > 0.0)) fail(ErrorCode::NonPositiveDepth, "cannot unproject a point with non-positive depth");
    Point3 q;
    q.z = cp.z_cam;
    q.y = (cp.y_cam - cy * q.z) / k.focal;
    q.x = (cp.x_cam - k.skew * q.y - cx * q.z) / k.focal;
    q.z -= view.standoff;
    out.points.push_back(view.pose.rotation.apply_transposed(q - view.pose.translation));
  }
  return out;
}

std::vector<Vec2> pixels_of(std::span<const CamPoint> points) {
  std::vector<Vec2> px;
  px.reserve(points.size());
  for (const auto& p : points) px.push_back(p.pixel());
  return px;
}

bool covers_nearer(const CamPoint& a, const CamPoint& b, const CamPoint& c, const CamPoint& q, double eps_depth) noexcept {
  const Box box = padded_box(a, b, c);
  if (q.u < box.x0 || q.u > box.x1 || q.v < box.y0 || q.v > box.y1) return false;
  const double det = (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
  if (!(std::fabs(det) > 0.0)) return false;
  const double lb = ((q.u - a.u) * (c.v - a.v) - (q.v - a.v) * (c.u - a.u)) / det;
  const double lc = ((b.u - a.u) * (q.v - a.v) - (b.v - a.v) * (q.u - a.u)) / det;
  const double la = 1.0 - lb - lc;
  if (la < -kBarycentricTolerance || lb < -kBarycentricTolerance || lc < -kBarycentricTolerance) return false;
  const double inverse_depth = la / a.depth + lb / b.depth + lc / c.depth;
  if (!(inverse_depth > 0.0)) return false;
  return 1.0 / inverse_depth < q.depth - eps_depth;
}

VisibilityMask visibility_zbuffer(std::span<const CamPoint> points, std::span<const Face> faces, double eps_depth) {
  check_faces(points, faces);
  VisibilityMask mask(points.size(), 1);
  if (faces.empty()) return mask;
  const FaceGrid grid(points, faces);
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const CamPoint& q = points[static_cast<std::size_t>(i)];
    for (std::uint32_t f : grid.candidates(q.u, q.v)) {
      const Face& face = faces[f];
      if (incident(face, static_cast<std::uint32_t>(i))) continue;
      if (covers_nearer(points[face[0]], points[face[1]], points[face[2]], q, eps_depth)) {
        mask[static_cast<std::size_t>(i)] = 0;
        break;
      }
    }
  }
  return mask;
}

VisibilityMask visibility_reference(std::span<const CamPoint> points, std::span<const Face> faces, double eps_depth) {
  check_faces(points, faces);
  VisibilityMask mask(points.size(), 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const Face& face : faces) {
      if (incident(face, static_cast<std::uint32_t>(i))) continue;
      if (covers_nearer(points[face[0]], points[face[1]], points[face[2]], points[i], eps_depth)) {
        mask[i] = 0;
        break;
      }
    }
  }
  return mask;
}

VisibilityMask front_to_back_visibility(std::span<const CamPoint> points, double eps_depth) {
  const std::vector<Vec2> pixels = pixels_of(points);
  std::vector<std::uint32_t> order(points.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (points[a].depth != points[b].depth) return points[a].depth < points[b].depth;
    return a < b;
  });

  VisibilityMask mask(points.size(), 0);
  IncrementalDelaunay surface(pixels);
  for (std::uint32_t i : order) {
    const CamPoint& q = points[i];
    const bool hidden = surface.any_triangle(
        [&](const Face& f) { return covers_nearer(points[f[0]], points[f[1]], points[f[2]], q, eps_depth); });
    if (hidden) continue;
    mask[i] = 1;
    surface.insert(i);
  }
  return mask;
}

OccludedView occlude(const PointCloud& cloud, const ViewSpec& view, double eps_depth) {
  require_finite(cloud);
  const std::vector<CamPoint> cam = project_to_camera(cloud, view);

  OccludedView out;
  out.view = view;
  out.visible_mask = front_to_back_visibility(cam, eps_depth);

  std::vector<CamPoint> survivors;
  for (std::size_t i = 0; i < cam.size(); ++i)
    if (out.visible_mask[i]) survivors.push_back(cam[i]);
  if (survivors.empty()) fail(ErrorCode::AllOccluded, "no point survived occlusion");
  out.cloud = unproject(survivors, view);
  out.cloud.label = cloud.label;
  return out;
}

std::vector<ViewSpec> sample_views(std::size_t count, Rng& rng, const CameraIntrinsics& intrinsics, double standoff) {
  if (count == 0) fail(ErrorCode::InvalidArgument, "view count must be >= 1");
  std::vector<ViewSpec> views(count);
  for (auto& v : views) {
    const double yaw = uniform(rng, 0.0, 2.0 * M_PI);
    const double pitch = uniform(rng, 0.0, 2.0 * M_PI);
    const double roll = uniform(rng, 0.0, 2.0 * M_PI);
    v.intrinsics = intrinsics;
    v.pose.rotation = euler_rotation(yaw, pitch, roll);
    v.pose.translation = {};
    v.standoff = standoff;
  }
  return views;
}

}  // namespace occo
