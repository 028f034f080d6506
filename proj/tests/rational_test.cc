// Copyright 2026 The SDL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sdl/rational.h"

#include <set>

#include "gtest/gtest.h"
#include "sdl/seeding.h"

namespace sdl {
namespace {

TEST(RationalTest, ParseAndFormat) {
  EXPECT_EQ(*ParseRational("6/4"), MakeRational(3, 2));
  EXPECT_EQ(*ParseRational("-2/8"), MakeRational(-1, 4));
  EXPECT_EQ(*ParseRational("7"), 7);
  EXPECT_FALSE(ParseRational("1/0").ok());
  EXPECT_FALSE(ParseRational("").ok());
  EXPECT_FALSE(ParseRational("0.5").ok());
  EXPECT_EQ(FormatRational(MakeRational(3)), "3/1");
  EXPECT_EQ(FormatRational(MakeRational(0)), "0/1");
  EXPECT_EQ(FormatRational(MakeRational(10, 4)), "5/2");
}

TEST(RationalTest, Pow) {
  EXPECT_EQ(Pow(MakeRational(2, 3), 3), MakeRational(8, 27));
  EXPECT_EQ(Pow(MakeRational(5, 7), 0), 1);
}

TEST(SeedingTest, DerivedSeedsDiffer) {
  std::set<uint64_t> seeds;
  for (const char* label : {"a", "b", "mechanisms/geometric", "mechanisms/swap"}) {
    EXPECT_TRUE(seeds.insert(DeriveSeed(42, label)).second);
  }
  EXPECT_EQ(DeriveSeed(42, "a"), DeriveSeed(42, "a"));
  EXPECT_NE(DeriveSeed(42, "a"), DeriveSeed(43, "a"));
}

TEST(SeedingTest, BelowAndBernoulli) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.Below(7), 7u);
  EXPECT_FALSE(rng.Bernoulli(MakeRational(0)));
  EXPECT_TRUE(rng.Bernoulli(MakeRational(1)));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Next(), b.Next());
}

TEST(SeedingTest, GeometricFrequencies) {
  // P(0) = 1/3 at a = 1/2; 3 * 10^4 draws puts 4 SE at about 0.011.
  Rng rng(3);
  const int n = 30000;
  int zeros = 0;
  long sum = 0;
  for (int i = 0; i < n; ++i) {
    const int64_t k = rng.TwoSidedGeometric(MakeRational(1, 2));
    zeros += k == 0;
    sum += k;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / n, 1.0 / 3, 0.011);
  EXPECT_NEAR(static_cast<double>(sum) / n, 0.0, 0.05);
}

}  // namespace
}  // namespace sdl
