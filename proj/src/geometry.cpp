// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "occo/geometry.hpp"
#include "occo/seed.hpp"

namespace occo {

Mat3 euler_rotation(double yaw, double pitch, double roll) noexcept {
  const double cz = std::cos(yaw), sz = std::sin(yaw);
  const double cy = std::cos(pitch), sy = std::sin(pitch);
  const double cx = std::cos(roll), sx = std::sin(roll);
  Mat3 rz{{cz, -sz, 0, sz, cz, 0, 0, 0, 1}};
  Mat3 ry{{cy, 0, sy, 0, 1, 0, -sy, 0, cy}};
  Mat3 rx{{1, 0, 0, 0, cx, -sx, 0, sx, cx}};
  return rz * ry * rx;
}

double standard_normal(Rng& rng) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace occo
