// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace occo {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives a child seed from a parent seed, a label, and any number of indices.
/// All randomness in the project flows through this so parallel and serial
/// runs draw identical streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                    std::initializer_list<std::uint64_t> ids = {}) noexcept {
  std::uint64_t h = mix64(base ^ mix64(hash_label(label)));
  for (std::uint64_t id : ids) h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t base, std::string_view label,
                    std::initializer_list<std::uint64_t> ids = {}) {
  return Rng(derive_seed(base, label, ids));
}

// Uniform double in [0, 1) with 53 random bits. Unlike
// std::uniform_real_distribution its output is fixed by the standard engine.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

// Standard normal via Box-Muller; one draw per call keeps streams simple.
double standard_normal(Rng& rng);

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace occo
