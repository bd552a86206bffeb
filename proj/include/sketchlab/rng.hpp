// Copyright 2026 The Sketchlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sketchlab::rng {

// Counter-based generator (Philox 4x32-10). Every variate is a pure function
// of (seed, stream, trial, row, col), so draws are reproducible regardless of
// evaluation order or parallelism, and a sketch entry keeps its value when
// the sketch is enlarged.

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

}  // namespace detail

// Ten-round Philox block: 128 counter bits -> 128 pseudo-random bits.
inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> ctr, std::uint64_t seed) {
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int round = 0; round < 10; ++round) {
    detail::philox_round(ctr, k0, k1);
    k0 += detail::kWeyl0;
    k1 += detail::kWeyl1;
  }
  return ctr;
}

// Uniform double in (0, 1) from 64 random bits; never exactly 0 or 1.
inline double uniform_double(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi) << 32) | static_cast<std::uint64_t>(lo);
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// One standard normal variate addressed by (seed, stream, trial, row, col).
// Box-Muller on the two uniforms carried by a single Philox block.
inline double normal(std::uint64_t seed, std::uint32_t stream,
                     std::uint32_t trial, std::uint32_t row,
                     std::uint32_t col) {
  const auto w = philox4x32({col, row, trial, stream}, seed);
  const double u1 = uniform_double(w[0], w[1]);
  const double u2 = uniform_double(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// One Rademacher variate (+1 or -1 with equal probability), same addressing.
inline double rademacher(std::uint64_t seed, std::uint32_t stream,
                         std::uint32_t trial, std::uint32_t row,
                         std::uint32_t col) {
  const auto w = philox4x32({col, row, trial, stream}, seed);
  return (w[0] & 1u) ? 1.0 : -1.0;
}

// Stream identifiers keeping independent uses of one seed disjoint.
inline constexpr std::uint32_t kStreamSketch = 0;       // plain sketch draws
inline constexpr std::uint32_t kStreamSynthesisU = 1;   // left Haar factor
inline constexpr std::uint32_t kStreamSynthesisV = 2;   // right Haar factor
inline constexpr std::uint32_t kStreamData = 3;         // synthetic vectors
inline constexpr std::uint32_t kStreamKaczmarz = 0x10000;  // + step index

}  // namespace sketchlab::rng
