// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "occo/cloud.hpp"
#include "occo/predicates.hpp"

namespace occo {

/// Incremental Bowyer-Watson triangulation over a fixed point table.
///
/// Points are referenced by their index into the table given at construction
/// and inserted one at a time. Hull edges carry "ghost" triangles joined to a
/// vertex at infinity, so no super-triangle is needed and the result always
/// covers the convex hull. All geometric decisions use exact predicates.
class IncrementalDelaunay {
 public:
  static constexpr std::uint32_t kGhost = std::numeric_limits<std::uint32_t>::max();

  explicit IncrementalDelaunay(std::span<const Vec2> table, double dedup_tolerance = 1e-9);

  enum class Inserted { Added, Duplicate, Pending };

  // Pending: the point is held back while every point seen so far is collinear.
  Inserted insert(std::uint32_t index);

  // Counter-clockwise solid triangles, in creation order.
  std::vector<Face> triangles() const;

  template <typename Fn>
  void for_each_triangle(Fn&& fn) const {
    for (const auto& t : tris_)
      if (t.alive && t.v[2] != kGhost) fn(t.v);
  }

  // Early-exit scan over solid triangles.
  template <typename Pred>
  bool any_triangle(Pred&& pred) const {
    for (const auto& t : tris_)
      if (t.alive && t.v[2] != kGhost && pred(t.v)) return true;
    return false;
  }

  std::size_t vertex_count() const noexcept { return inserted_.size(); }
  bool has_triangles() const noexcept { return solid_count_ > 0; }

 private:
  struct Tri {
    Face v;
    bool alive = true;
  };

  bool conflicts(const Tri& t, const Vec2& p) const;
  void bootstrap(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void cavity_insert(std::uint32_t index);
  void add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void compact();
  bool is_duplicate(const Vec2& p) const;

  std::span<const Vec2> table_;
  double dedup_tol_sq_;
  std::vector<Tri> tris_;
  std::vector<std::uint32_t> inserted_;
  std::vector<std::uint32_t> pending_;
  std::size_t solid_count_ = 0;
  std::size_t dead_count_ = 0;
};

/// Delaunay triangulation of 2D points. Input is inserted in lexicographic
/// order; points closer than the dedup tolerance to an earlier point are
/// merged into it and never appear in a face. Fewer than three non-collinear
/// points give an empty face list. Output vertices are the inputs with z = 0.
TriMesh delaunay_2d(std::span<const Vec2> pixels, double dedup_tolerance = 1e-9);

}  // namespace occo
