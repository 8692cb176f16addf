// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace occo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

// Sign of the orientation determinant: +1 when (a, b, c) turn counter-clockwise,
// -1 clockwise, 0 collinear. Exact: a floating-point filter with a rational
// fallback when the filter cannot certify the sign.
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

// +1 when d lies strictly inside the circle through counter-clockwise (a, b, c),
// -1 strictly outside, 0 on the circle. Exact, same scheme as orient2d.
int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace occo
