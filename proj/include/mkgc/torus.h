/*
 * Copyright 2026 The mkgc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MKGC_TORUS_H_
#define MKGC_TORUS_H_

#include <cstdint>
#include <random>

namespace mkgc {

// An element of the real torus R/Z discretized to 32 bits: the value is
// raw * 2^-32 mod 1. All arithmetic wraps modulo 2^32.
struct Torus32 {
  std::uint32_t raw = 0;

  constexpr Torus32() = default;
  constexpr explicit Torus32(std::uint32_t r) : raw(r) {}

  constexpr Torus32& operator+=(Torus32 o) {
    raw += o.raw;
    return *this;
  }
  constexpr Torus32& operator-=(Torus32 o) {
    raw -= o.raw;
    return *this;
  }
  friend constexpr Torus32 operator+(Torus32 a, Torus32 b) { return a += b; }
  friend constexpr Torus32 operator-(Torus32 a, Torus32 b) { return a -= b; }
  friend constexpr Torus32 operator-(Torus32 a) { return Torus32(0u - a.raw); }
  // Scalar multiplication by a signed integer, modulo 2^32.
  friend constexpr Torus32 operator*(std::int32_t k, Torus32 a) {
    return Torus32(static_cast<std::uint32_t>(k) * a.raw);
  }
  friend constexpr bool operator==(Torus32, Torus32) = default;

  // Signed representative in [-2^31, 2^31), i.e. the value in [-1/2, 1/2).
  constexpr std::int32_t centered() const {
    return static_cast<std::int32_t>(raw);
  }
  // Real representative in [0, 1).
  double to_double() const { return static_cast<double>(raw) * 0x1p-32; }
};

// Exact (num / den) mod 1 for den a power of two in [1, 2^32].
// Throws std::invalid_argument otherwise.
Torus32 torus_from_rational(std::int64_t num, std::uint64_t den);

// Rounds a real number to the nearest 32-bit torus point.
Torus32 torus_from_double(double x);

// Message encoding with scaling factor 1/4: 0 -> 0, 1 -> 1/4.
Torus32 mod_to_t(int m);

// Shortest distance on the torus between a and b, in raw units.
std::uint32_t torus_distance(Torus32 a, Torus32 b);

// Seeded rounded-Gaussian sampler over the torus. Not shared across threads.
class NoiseSampler {
 public:
  NoiseSampler(double stddev, std::uint64_t seed);

  double stddev() const { return stddev_; }
  Torus32 sample();

 private:
  double stddev_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace mkgc

#endif  // MKGC_TORUS_H_
