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

#ifndef SDL_CRITIQUES_H_
#define SDL_CRITIQUES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/rational.h"
#include "sdl/reident.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {

struct GuessStrategy {
  enum class Kind { kConstant, kProportionalToPopulation, kUniformOverCombos };
  Kind kind = Kind::kConstant;
  int sex = 1;
  int age = 50;
};

// One row per block: how often the block was drawn and the guess matched
// someone in it (hits) or nobody (misses).
struct RvrBlockRow {
  int block = 0;
  int64_t population = 0;
  uint64_t hits = 0;
  uint64_t misses = 0;
};

struct RvrOutcome {
  uint64_t trials = 0;
  uint64_t successes = 0;
  double rate = 0;
  std::vector<RvrBlockRow> per_block;
};

// Each trial draws a block with probability proportional to population,
// draws a (sex, age) guess from the strategy, and credits a success when
// anyone in the block has that combination. Credits are not one-to-one: the
// same respondent can be credited on every trial. Trial t draws from its own
// stream, so the result does not depend on evaluation order.
absl::StatusOr<RvrOutcome> RvrSimulate(const Dataset& data,
                                       const GuessStrategy& strategy,
                                       uint64_t trials, uint64_t seed);

// Exact success probability of a constant guess: population-weighted share
// of blocks containing the combination.
absl::StatusOr<Rational> RvrAnalytic(const Dataset& data, int sex, int age);

struct DegenerateExhibit {
  int sex = 0;
  int age = 0;
  Rational rvr_rate;
  Rational population_share;  // combo count / population
  Rational inflation;         // rvr_rate / population_share
  // The same guess as an attacker file, one record per respondent, matched
  // one-to-one on (block, sex, age).
  size_t one_to_one_matches = 0;
  Rational one_to_one_rate;
};

// Uses the constant guess that maximizes the RVR rate (lowest (sex, age) on
// ties) unless one is given.
absl::StatusOr<DegenerateExhibit> RvrDegenerateExhibit(
    const Dataset& data, std::optional<std::pair<int, int>> combo = {});

// nullopt means "no change" (both zero). 200 (b - a) / (a + b).
absl::StatusOr<std::optional<Rational>> ArcPctChange(int64_t a, int64_t b);
// nullopt means undefined (zero base). 100 (b - a) / a.
absl::StatusOr<std::optional<Rational>> NaivePctChange(int64_t a, int64_t b);

// Share of aligned cells equal to zero in both table lists. Suppressed cells
// never count as zero.
absl::StatusOr<Rational> BothZeroFraction(std::span<const Table> a,
                                          std::span<const Table> b);

// Predicted attribute: race and ethnicity combined as race * levels + eth.
int RaceEthnicityOf(const Person& p, const Schema& schema);

struct GroupAccuracy {
  std::string label;
  size_t persons = 0;
  size_t predicted = 0;
  size_t correct = 0;
};

struct ModalReport {
  // Aligned with data.persons(); nullopt for blocks under min_block.
  std::vector<std::optional<int>> predictions;
  size_t predicted = 0;
  size_t correct = 0;
  Rational accuracy;  // correct / predicted, 0 when nothing is predicted
  size_t nonmodal_predicted = 0;
  Rational nonmodal_precision;  // always 0: the mode never names them
  std::vector<GroupAccuracy> by_block_size;
  std::vector<GroupAccuracy> by_homogeneity;
};

// Predicts each block's most common race/ethnicity (lowest index on ties)
// for every resident of blocks with at least min_block people.
ModalReport ModalBaseline(const Dataset& data, size_t min_block = 5);

struct SubgroupGap {
  size_t persons = 0;
  Rational in_sample;
  Rational loo;
  Rational gap;
};

struct LooReport {
  SubgroupGap all;
  SubgroupGap modal;
  SubgroupGap nonmodal;
};

// In-sample versus leave-one-out accuracy of the modal predictor over
// residents of blocks with at least min_block people (judged on the full
// block). Leaving out the only resident of a block leaves nothing to learn
// from, which counts as a miss. Modal/nonmodal follows the in-sample mode.
LooReport LooGap(const Dataset& data, size_t min_block = 1);

}  // namespace sdl

#endif  // SDL_CRITIQUES_H_
