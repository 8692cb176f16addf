// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "occo/cloud.hpp"

namespace occo {

struct LossValue {
  double value = 0.0;
  // d value / d pred, one 3-vector per predicted point; empty when not requested.
  std::vector<Point3> gradient;
};

/// Symmetric, size-normalized Chamfer distance with non-squared Euclidean
/// terms. Nearest-neighbour ties go to the lowest index. Queries use a k-d
/// tree and run in parallel; per-point terms are summed serially in index
/// order, so the value is bit-identical to chamfer_bruteforce. Any non-finite
/// coordinate yields a NaN value and NaN gradient.
LossValue chamfer(std::span<const Point3> pred, std::span<const Point3> target, bool with_gradient = true);
inline LossValue chamfer(const PointCloud& pred, const PointCloud& target, bool with_gradient = true) {
  return chamfer(pred.points, target.points, with_gradient);
}

// O(n*m) serial oracle for chamfer.
LossValue chamfer_bruteforce(std::span<const Point3> pred, std::span<const Point3> target, bool with_gradient = true);
inline LossValue chamfer_bruteforce(const PointCloud& pred, const PointCloud& target, bool with_gradient = true) {
  return chamfer_bruteforce(pred.points, target.points, with_gradient);
}

struct Assignment {
  std::vector<std::uint32_t> mapping;  // pred i -> target mapping[i]
  double cost = 0.0;                   // mean matched distance
};

inline constexpr std::size_t kExactEmdLimit = 16;

// Optimal bijection by the Hungarian method; |pred| == |target| <= 16.
Assignment emd_exact(std::span<const Point3> pred, std::span<const Point3> target);

/// Forward auction with epsilon scaling. Starts at eps = max cost / 2 and
/// divides by `scaling` until eps <= eps_final / n, so the mean cost is
/// within eps_final / n of the optimum.
Assignment emd_auction(std::span<const Point3> pred, std::span<const Point3> target, double eps_final = 1e-6,
                       double scaling = 5.0);

// Mean matched distance of a bijection, summed in index order.
double assignment_cost(std::span<const Point3> pred, std::span<const Point3> target,
                       std::span<const std::uint32_t> mapping);

/// Weight of the fine-cloud term: 0.01 below step 10000, 0.1 below 20000,
/// 0.5 below 50000, then 1.0.
double alpha_schedule(std::uint64_t step) noexcept;

struct CompletionLoss {
  double value = 0.0;
  double cd_coarse = 0.0;
  double cd_fine = 0.0;
  double alpha = 0.0;
  std::vector<Point3> grad_coarse;
  std::vector<Point3> grad_fine;
};

// CD(coarse) + alpha * CD(fine), with gradients for both predictions.
CompletionLoss completion_loss_weighted(std::span<const Point3> coarse_pred, std::span<const Point3> fine_pred,
                                        std::span<const Point3> coarse_gt, std::span<const Point3> fine_gt, double alpha,
                                        bool with_gradient = true);

inline CompletionLoss completion_loss(std::span<const Point3> coarse_pred, std::span<const Point3> fine_pred,
                                      std::span<const Point3> coarse_gt, std::span<const Point3> fine_gt,
                                      std::uint64_t step, bool with_gradient = true) {
  return completion_loss_weighted(coarse_pred, fine_pred, coarse_gt, fine_gt, alpha_schedule(step), with_gradient);
}

}  // namespace occo
