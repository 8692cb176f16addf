// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "occo/cloud.hpp"
#include "occo/error.hpp"
#include "occo/seed.hpp"

// Expects `stmt` to throw occo::Error with the given code.
#define EXPECT_OCCO_ERROR(stmt, error_code)                                  \
  do {                                                                       \
    try {                                                                    \
      stmt;                                                                  \
      ADD_FAILURE() << "no exception from " #stmt;                           \
    } catch (const occo::Error& e__) {                                       \
      EXPECT_EQ(e__.code(), error_code) << e__.what();                       \
    }                                                                        \
  } while (0)

namespace occo::testing {

inline PointCloud gaussian_cloud(std::size_t n, Rng& rng, double sigma = 1.0) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i)
    c.points.push_back({sigma * standard_normal(rng), sigma * standard_normal(rng), sigma * standard_normal(rng)});
  return c;
}

inline PointCloud uniform_cloud(std::size_t n, Rng& rng, double half = 1.0) {
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i)
    c.points.push_back({uniform(rng, -half, half), uniform(rng, -half, half), uniform(rng, -half, half)});
  return c;
}

inline double max_abs_diff(const PointCloud& a, const PointCloud& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a[i][k] - b[i][k]));
  return m;
}

// Kolmogorov distribution tail P(K > x).
inline double kolmogorov_q(double x) {
  if (x < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k < 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace occo::testing
