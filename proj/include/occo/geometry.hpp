// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

namespace occo {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Point3& operator+=(const Point3& o) noexcept {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Point3& operator-=(const Point3& o) noexcept {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Point3& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Point3 operator+(Point3 a, const Point3& b) noexcept { return a += b; }
  friend constexpr Point3 operator-(Point3 a, const Point3& b) noexcept { return a -= b; }
  friend constexpr Point3 operator*(Point3 a, double s) noexcept { return a *= s; }
  friend constexpr Point3 operator*(double s, Point3 a) noexcept { return a *= s; }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;

  constexpr double operator[](int i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) noexcept { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr double dot(const Point3& a, const Point3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Point3 cross(const Point3& a, const Point3& b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& a) noexcept { return std::sqrt(dot(a, a)); }

inline double squared_distance(const Point3& a, const Point3& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) noexcept { return std::sqrt(squared_distance(a, b)); }

inline bool is_finite(const Point3& p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  constexpr double operator()(int r, int c) const noexcept { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double& operator()(int r, int c) noexcept { return m[static_cast<std::size_t>(3 * r + c)]; }

  static constexpr Mat3 identity() noexcept { return {}; }

  constexpr Point3 apply(const Point3& p) const noexcept {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
            m[6] * p.x + m[7] * p.y + m[8] * p.z};
  }

  // R^T p, the inverse for orthonormal matrices.
  constexpr Point3 apply_transposed(const Point3& p) const noexcept {
    return {m[0] * p.x + m[3] * p.y + m[6] * p.z, m[1] * p.x + m[4] * p.y + m[7] * p.z,
            m[2] * p.x + m[5] * p.y + m[8] * p.z};
  }

  constexpr Mat3 transposed() const noexcept {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
  }

  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) noexcept {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    return out;
  }

  constexpr double determinant() const noexcept {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
};

/// R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 euler_rotation(double yaw, double pitch, double roll) noexcept;

}  // namespace occo
