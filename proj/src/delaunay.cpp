// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace occo {
namespace {

constexpr std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) noexcept {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// p strictly inside segment [u, v], given the three are collinear.
bool strictly_between(const Vec2& u, const Vec2& v, const Vec2& p) noexcept {
  if (u.x != v.x) return (u.x < p.x && p.x < v.x) || (v.x < p.x && p.x < u.x);
  return (u.y < p.y && p.y < v.y) || (v.y < p.y && p.y < u.y);
}

}  // namespace

IncrementalDelaunay::IncrementalDelaunay(std::span<const Vec2> table, double dedup_tolerance)
    : table_(table), dedup_tol_sq_(dedup_tolerance * dedup_tolerance) {}

bool IncrementalDelaunay::is_duplicate(const Vec2& p) const {
  auto near = [&](std::uint32_t j) {
    const double dx = table_[j].x - p.x, dy = table_[j].y - p.y;
    return dx * dx + dy * dy <= dedup_tol_sq_;
  };
  return std::any_of(inserted_.begin(), inserted_.end(), near) || std::any_of(pending_.begin(), pending_.end(), near);
}

IncrementalDelaunay::Inserted IncrementalDelaunay::insert(std::uint32_t index) {
  const Vec2& p = table_[index];
  if (is_duplicate(p)) return Inserted::Duplicate;

  if (solid_count_ == 0) {
    // Wait for a point that is not collinear with the ones held so far.
    if (pending_.size() >= 2) {
      const std::uint32_t a = pending_[0];
      for (std::size_t k = 1; k < pending_.size(); ++k) {
        const std::uint32_t b = pending_[k];
        if (orient2d(table_[a], table_[b], p) != 0) {
          auto rest = pending_;
          pending_.clear();
          bootstrap(a, b, index);
          for (std::uint32_t r : rest)
            if (r != a && r != b) cavity_insert(r);
          return Inserted::Added;
        }
      }
    }
    pending_.push_back(index);
    return Inserted::Pending;
  }

  cavity_insert(index);
  return Inserted::Added;
}

void IncrementalDelaunay::bootstrap(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (orient2d(table_[a], table_[b], table_[c]) < 0) std::swap(b, c);
  add_triangle(a, b, c);
  add_triangle(b, a, kGhost);
  add_triangle(c, b, kGhost);
  add_triangle(a, c, kGhost);
  inserted_.insert(inserted_.end(), {a, b, c});
}

void IncrementalDelaunay::add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  // Keep the ghost vertex in the last slot.
  if (a == kGhost) {
    std::tie(a, b, c) = std::make_tuple(b, c, a);
  } else if (b == kGhost) {
    std::tie(a, b, c) = std::make_tuple(c, a, b);
  }
  tris_.push_back({Face{a, b, c}, true});
  if (c != kGhost) ++solid_count_;
}

bool IncrementalDelaunay::conflicts(const Tri& t, const Vec2& p) const {
  if (t.v[2] != kGhost) return incircle(table_[t.v[0]], table_[t.v[1]], table_[t.v[2]], p) > 0;
  // Ghost (u, v, inf): the exterior lies to the left of u -> v. Its "circle"
  // is the open outer half-plane plus the open hull edge itself.
  const Vec2& u = table_[t.v[0]];
  const Vec2& v = table_[t.v[1]];
  const int o = orient2d(u, v, p);
  return o > 0 || (o == 0 && strictly_between(u, v, p));
}

void IncrementalDelaunay::cavity_insert(std::uint32_t index) {
  const Vec2& p = table_[index];
  std::vector<std::size_t> cavity;
  for (std::size_t i = 0; i < tris_.size(); ++i)
    if (tris_[i].alive && conflicts(tris_[i], p)) cavity.push_back(i);

  std::unordered_set<std::uint64_t> cavity_edges;
  cavity_edges.reserve(cavity.size() * 3);
  for (std::size_t i : cavity) {
    const Face& v = tris_[i].v;
    for (int e = 0; e < 3; ++e) cavity_edges.insert(edge_key(v[e], v[(e + 1) % 3]));
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary;
  for (std::size_t i : cavity) {
    Tri& t = tris_[i];
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = t.v[e], b = t.v[(e + 1) % 3];
      if (!cavity_edges.count(edge_key(b, a))) boundary.emplace_back(a, b);
    }
    t.alive = false;
    ++dead_count_;
    if (t.v[2] != kGhost) --solid_count_;
  }
  for (auto [a, b] : boundary) add_triangle(a, b, index);
  inserted_.push_back(index);
  if (dead_count_ > tris_.size() / 2) compact();
}

void IncrementalDelaunay::compact() {
  std::erase_if(tris_, [](const Tri& t) { return !t.alive; });
  dead_count_ = 0;
}

std::vector<Face> IncrementalDelaunay::triangles() const {
  std::vector<Face> out;
  out.reserve(solid_count_);
  for_each_triangle([&](const Face& f) { out.push_back(f); });
  return out;
}

TriMesh delaunay_2d(std::span<const Vec2> pixels, double dedup_tolerance) {
  TriMesh mesh;
  mesh.vertices.reserve(pixels.size());
  for (const auto& p : pixels) mesh.vertices.push_back({p.x, p.y, 0.0});

  std::vector<std::uint32_t> order(pixels.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (pixels[a].x != pixels[b].x) return pixels[a].x < pixels[b].x;
    if (pixels[a].y != pixels[b].y) return pixels[a].y < pixels[b].y;
    return a < b;
  });

  IncrementalDelaunay dt(pixels, dedup_tolerance);
  for (std::uint32_t idx : order) dt.insert(idx);
  mesh.faces = dt.triangles();
  return mesh;
}

}  // namespace occo
