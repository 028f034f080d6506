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

#ifndef SDL_SEEDING_H_
#define SDL_SEEDING_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "sdl/rational.h"

namespace sdl {

uint64_t SplitMix64(uint64_t x);

// Subseed for a named component: SplitMix64(seed ^ FNV-1a(label)). Every
// stochastic component draws from its own subseed so that adding a consumer
// never shifts another consumer's stream.
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

// Thin wrapper over mt19937_64 whose sampling routines are written out by hand
// so that streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t Below(uint64_t bound);

  // Exact Bernoulli draw for a rational probability in [0, 1].
  bool Bernoulli(const Rational& p);

  // Index drawn proportionally to nonnegative weights with positive sum.
  size_t Categorical(std::span<const double> weights);

  // Two-sided geometric noise with P(k) = (1-a)/(1+a) * a^|k|, drawn exactly
  // as the difference of two one-sided geometric variables.
  int64_t TwoSidedGeometric(const Rational& alpha);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sdl

#endif  // SDL_SEEDING_H_
