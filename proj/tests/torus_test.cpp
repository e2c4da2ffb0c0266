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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

namespace mkgc {
namespace {

TEST(Torus, RationalIsExactForDyadicFractions) {
  EXPECT_EQ(torus_from_rational(1, 4).raw, 0x40000000u);
  EXPECT_EQ(torus_from_rational(1, 8).raw, 0x20000000u);
  EXPECT_EQ(torus_from_rational(-1, 8).raw, 0xE0000000u);
  EXPECT_EQ(torus_from_rational(5, 8).raw, 0xA0000000u);
  EXPECT_EQ(torus_from_rational(9, 8), torus_from_rational(1, 8));
  EXPECT_EQ(torus_from_rational(3, 1).raw, 0u);
}

TEST(Torus, RationalRejectsNonDyadicDenominators) {
  EXPECT_THROW(torus_from_rational(1, 3), std::invalid_argument);
  EXPECT_THROW(torus_from_rational(1, 0), std::invalid_argument);
  EXPECT_THROW(torus_from_rational(1, std::uint64_t{1} << 33),
               std::invalid_argument);
}

TEST(Torus, ArithmeticWraps) {
  const Torus32 three_quarters = torus_from_rational(3, 4);
  const Torus32 half = torus_from_rational(1, 2);
  EXPECT_EQ(three_quarters + half, torus_from_rational(1, 4));
  EXPECT_EQ(-half, half);
  EXPECT_EQ(2 * three_quarters, half);
  EXPECT_EQ(-3 * torus_from_rational(1, 4), torus_from_rational(1, 4));
}

TEST(Torus, CenteredAndRealViews) {
  EXPECT_EQ(torus_from_rational(-1, 4).centered(), -(1 << 30));
  EXPECT_DOUBLE_EQ(torus_from_rational(3, 4).to_double(), 0.75);
  EXPECT_EQ(torus_from_double(0.25), torus_from_rational(1, 4));
  EXPECT_EQ(torus_from_double(-0.25), torus_from_rational(3, 4));
}

TEST(Torus, MessageEncoding) {
  EXPECT_EQ(mod_to_t(0).raw, 0u);
  EXPECT_EQ(mod_to_t(1), torus_from_rational(1, 4));
  EXPECT_THROW(mod_to_t(2), std::invalid_argument);
}

TEST(Torus, DistanceIsSymmetricAndShortest) {
  const Torus32 a = torus_from_rational(1, 8), b = torus_from_rational(7, 8);
  EXPECT_EQ(torus_distance(a, b), 0x40000000u);
  EXPECT_EQ(torus_distance(b, a), 0x40000000u);
  EXPECT_EQ(torus_distance(a, a), 0u);
}

TEST(Torus, SamplerIsDeterministicAndScaled) {
  NoiseSampler s1(1e-3, 42), s2(1e-3, 42);
  double sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Torus32 e = s1.sample();
    ASSERT_EQ(e, s2.sample());
    const double v = e.centered() * 0x1p-32;
    sum_sq += v * v;
  }
  // Sample standard deviation within 5% of the target.
  EXPECT_NEAR(std::sqrt(sum_sq / n), 1e-3, 5e-5);
  NoiseSampler zero(0.0, 1);
  EXPECT_EQ(zero.sample().raw, 0u);
}

}  // namespace
}  // namespace mkgc
