// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "occo/error.hpp"

namespace occo {
namespace {

struct Neighbor {
  double sq = std::numeric_limits<double>::infinity();
  std::uint32_t index = std::numeric_limits<std::uint32_t>::max();

  void offer(double d2, std::uint32_t i) noexcept {
    if (d2 < sq || (d2 == sq && i < index)) {
      sq = d2;
      index = i;
    }
  }
};

// Static k-d tree over a point span; leaves hold up to kLeaf points.
class KdTree {
 public:
  explicit KdTree(std::span<const Point3> pts) : pts_(pts), order_(pts.size()) {
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(2 * pts.size() / kLeaf + 2);
    build(0, order_.size());
  }

  Neighbor nearest(const Point3& q) const {
    Neighbor best;
    search(0, q, best);
    return best;
  }

 private:
  static constexpr std::size_t kLeaf = 8;

  struct Node {
    std::size_t begin, end;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    std::size_t left = 0, right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    if (end - begin <= kLeaf) return id;

    Point3 lo{INFINITY, INFINITY, INFINITY}, hi{-INFINITY, -INFINITY, -INFINITY};
    for (std::size_t k = begin; k < end; ++k) {
      const Point3& p = pts_[order_[k]];
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Point3 ext = hi - lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::uint32_t a, std::uint32_t b) { return pts_[a][axis] < pts_[b][axis]; });
    const double split = pts_[order_[mid]][axis];
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void search(std::size_t id, const Point3& q, Neighbor& best) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) best.offer(squared_distance(q, pts_[order_[k]]), order_[k]);
      return;
    }
    // Left holds coordinates <= split, right holds >= split.
    const double diff = q[node.axis] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search(near, q, best);
    // Equal distances must still be visited for the lowest-index tie rule.
    if (diff * diff <= best.sq) search(far, q, best);
  }

  std::span<const Point3> pts_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

void require_nonempty(std::span<const Point3> pred, std::span<const Point3> target) {
  if (pred.empty() || target.empty()) fail(ErrorCode::EmptyCloud, "chamfer needs two non-empty clouds");
}

bool all_finite(std::span<const Point3> pts) noexcept {
  return std::all_of(pts.begin(), pts.end(),
                     [](const Point3& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); });
}

// Non-finite coordinates have no nearest neighbour; the result is NaN throughout.
LossValue nan_loss(std::size_t n_pred, bool with_gradient) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  LossValue out;
  out.value = nan;
  if (with_gradient) out.gradient.assign(n_pred, Point3{nan, nan, nan});
  return out;
}

LossValue assemble(std::span<const Point3> pred, std::span<const Point3> target, const std::vector<Neighbor>& fwd,
                   const std::vector<Neighbor>& bwd, bool with_gradient) {
  const double inv_p = 1.0 / static_cast<double>(pred.size());
  const double inv_t = 1.0 / static_cast<double>(target.size());
  std::vector<double> fwd_d(pred.size()), bwd_d(target.size());
  double fwd_sum = 0.0, bwd_sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) fwd_sum += (fwd_d[i] = std::sqrt(fwd[i].sq));
  for (std::size_t j = 0; j < target.size(); ++j) bwd_sum += (bwd_d[j] = std::sqrt(bwd[j].sq));

  LossValue out;
  out.value = fwd_sum * inv_p + bwd_sum * inv_t;
  if (!with_gradient) return out;

  out.gradient.assign(pred.size(), Point3{});
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (fwd_d[i] > 0.0) out.gradient[i] += (pred[i] - target[fwd[i].index]) * (inv_p / fwd_d[i]);
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    const std::uint32_t i = bwd[j].index;
    if (bwd_d[j] > 0.0) out.gradient[i] += (pred[i] - target[j]) * (inv_t / bwd_d[j]);
  }
  return out;
}

}  // namespace

LossValue chamfer(std::span<const Point3> pred, std::span<const Point3> target, bool with_gradient) {
  require_nonempty(pred, target);
  if (!all_finite(pred) || !all_finite(target)) return nan_loss(pred.size(), with_gradient);
  const KdTree target_tree(target);
  const KdTree pred_tree(pred);
  std::vector<Neighbor> fwd(pred.size()), bwd(target.size());
  const auto np = static_cast<std::ptrdiff_t>(pred.size());
  const auto nt = static_cast<std::ptrdiff_t>(target.size());
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < np; ++i) fwd[static_cast<std::size_t>(i)] = target_tree.nearest(pred[static_cast<std::size_t>(i)]);
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < nt; ++j) bwd[static_cast<std::size_t>(j)] = pred_tree.nearest(target[static_cast<std::size_t>(j)]);
  }
  return assemble(pred, target, fwd, bwd, with_gradient);
}

LossValue chamfer_bruteforce(std::span<const Point3> pred, std::span<const Point3> target, bool with_gradient) {
  require_nonempty(pred, target);
  if (!all_finite(pred) || !all_finite(target)) return nan_loss(pred.size(), with_gradient);
  std::vector<Neighbor> fwd(pred.size()), bwd(target.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double d2 = squared_distance(pred[i], target[j]);
      fwd[i].offer(d2, static_cast<std::uint32_t>(j));
      bwd[j].offer(squared_distance(target[j], pred[i]), static_cast<std::uint32_t>(i));
    }
  return assemble(pred, target, fwd, bwd, with_gradient);
}

double assignment_cost(std::span<const Point3> pred, std::span<const Point3> target,
                       std::span<const std::uint32_t> mapping) {
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += distance(pred[i], target[mapping[i]]);
  return sum / static_cast<double>(pred.size());
}

Assignment emd_exact(std::span<const Point3> pred, std::span<const Point3> target) {
  if (pred.size() != target.size()) fail(ErrorCode::SizeMismatch, "EMD needs equal-size clouds");
  if (pred.size() > kExactEmdLimit) fail(ErrorCode::TooLarge, "exact EMD is limited to 16 points");
  const std::size_t n = pred.size();
  Assignment out;
  if (n == 0) return out;

  // Shortest augmenting path Hungarian method with potentials, 1-based.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  auto cost = [&](std::size_t i, std::size_t j) { return distance(pred[i - 1], target[j - 1]); };
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), INFINITY);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = INFINITY;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  out.mapping.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.mapping[match[j] - 1] = static_cast<std::uint32_t>(j - 1);
  out.cost = assignment_cost(pred, target, out.mapping);
  return out;
}

Assignment emd_auction(std::span<const Point3> pred, std::span<const Point3> target, double eps_final, double scaling) {
  if (pred.size() != target.size()) fail(ErrorCode::SizeMismatch, "EMD needs equal-size clouds");
  if (!(eps_final > 0.0) || !(scaling > 1.0)) fail(ErrorCode::InvalidArgument, "auction needs eps_final > 0 and scaling > 1");
  const std::size_t n = pred.size();
  Assignment out;
  if (n == 0) return out;

  std::vector<double> cost(n * n);
  double max_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) max_cost = std::max(max_cost, cost[i * n + j] = distance(pred[i], target[j]));

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> owner(n, kNone), assigned(n, kNone);
  if (max_cost == 0.0 || n == 1) {
    out.mapping.resize(n);
    std::iota(out.mapping.begin(), out.mapping.end(), 0u);
    out.cost = assignment_cost(pred, target, out.mapping);
    return out;
  }

  // Maximise benefit -cost; objects carry prices.
  std::vector<double> price(n, 0.0);
  const double eps_stop = eps_final / static_cast<double>(n);
  double eps = max_cost / 2.0;
  std::vector<std::uint32_t> queue;
  for (;;) {
    std::fill(owner.begin(), owner.end(), kNone);
    std::fill(assigned.begin(), assigned.end(), kNone);
    queue.resize(n);
    std::iota(queue.begin(), queue.end(), 0u);
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::uint32_t i = queue[head++];
      double best = -INFINITY, second = -INFINITY;
      std::uint32_t best_j = 0;
      for (std::uint32_t j = 0; j < n; ++j) {
        const double value = -cost[i * n + j] - price[j];
        if (value > best) {
          second = best;
          best = value;
          best_j = j;
        } else if (value > second) {
          second = value;
        }
      }
      price[best_j] += best - second + eps;
      if (owner[best_j] != kNone) {
        assigned[owner[best_j]] = kNone;
        queue.push_back(owner[best_j]);
      }
      owner[best_j] = i;
      assigned[i] = best_j;
      // Compact the queue occasionally so it does not grow without bound.
      if (head > 4 * n && head * 2 > queue.size()) {
        queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
        head = 0;
      }
    }
    if (eps <= eps_stop) break;
    eps = std::max(eps / scaling, eps_stop);
  }
  out.mapping = assigned;
  out.cost = assignment_cost(pred, target, out.mapping);
  return out;
}

double alpha_schedule(std::uint64_t step) noexcept {
  if (step < 10000) return 0.01;
  if (step < 20000) return 0.1;
  if (step < 50000) return 0.5;
  return 1.0;
}

CompletionLoss completion_loss_weighted(std::span<const Point3> coarse_pred, std::span<const Point3> fine_pred,
                                        std::span<const Point3> coarse_gt, std::span<const Point3> fine_gt, double alpha,
                                        bool with_gradient) {
  LossValue coarse = chamfer(coarse_pred, coarse_gt, with_gradient);
  LossValue fine = chamfer(fine_pred, fine_gt, with_gradient);
  CompletionLoss out;
  out.cd_coarse = coarse.value;
  out.cd_fine = fine.value;
  out.alpha = alpha;
  out.value = coarse.value + alpha * fine.value;
  if (with_gradient) {
    out.grad_coarse = std::move(coarse.gradient);
    out.grad_fine = std::move(fine.gradient);
    for (auto& g : out.grad_fine) g *= alpha;
  }
  return out;
}

}  // namespace occo
