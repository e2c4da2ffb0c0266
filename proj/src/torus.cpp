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

#include "mkgc/torus.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mkgc {

Torus32 torus_from_rational(std::int64_t num, std::uint64_t den) {
  if (den == 0 || !std::has_single_bit(den) || den > (1ull << 32)) {
    throw std::invalid_argument("torus_from_rational: denominator " +
                                std::to_string(den) +
                                " is not a power of two in [1, 2^32]");
  }
  const int shift = 32 - std::countr_zero(den);
  // Wrapping left shift on the unsigned representation keeps the result
  // exact modulo 2^32 for any signed numerator.
  const std::uint64_t scaled = static_cast<std::uint64_t>(num) << shift;
  return Torus32(static_cast<std::uint32_t>(scaled));
}

Torus32 torus_from_double(double x) {
  const double frac = x - std::floor(x);
  const auto r = static_cast<std::uint64_t>(std::llround(frac * 0x1p32));
  return Torus32(static_cast<std::uint32_t>(r));
}

Torus32 mod_to_t(int m) {
  if (m != 0 && m != 1) {
    throw std::invalid_argument("mod_to_t: message must be a bit");
  }
  return torus_from_rational(m, 4);
}

std::uint32_t torus_distance(Torus32 a, Torus32 b) {
  const std::int64_t d = (a - b).centered();
  return static_cast<std::uint32_t>(d < 0 ? -d : d);
}

NoiseSampler::NoiseSampler(double stddev, std::uint64_t seed)
    : stddev_(stddev), engine_(seed), normal_(0.0, 1.0) {
  if (!(stddev >= 0.0)) {
    throw std::invalid_argument("NoiseSampler: stddev must be >= 0");
  }
}

Torus32 NoiseSampler::sample() {
  if (stddev_ == 0.0) return Torus32(0);
  return torus_from_double(stddev_ * normal_(engine_));
}

}  // namespace mkgc
