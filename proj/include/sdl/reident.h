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

#ifndef SDL_REIDENT_H_
#define SDL_REIDENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/world_model.h"

namespace sdl {

enum class AgeMode { kExact, kPlusMinusOne, kBinned };

struct KeySpec {
  std::vector<Attribute> attributes = {Attribute::kBlock, Attribute::kSex,
                                       Attribute::kAge, Attribute::kRace,
                                       Attribute::kEthnicity};
  AgeMode age_mode = AgeMode::kExact;
  std::optional<AgeBinSystem> bins;  // kBinned only
};

absl::Status ValidateKey(const KeySpec& key);

struct MatchResult {
  // (attacker id, confidential id), sorted by attacker id.
  std::vector<std::pair<int64_t, int64_t>> assignments;
  size_t attacker_size = 0;
  size_t match_count = 0;
  // Matches whose block, sex, age, race and ethnicity all agree, restricted
  // to data-defined confidential records when requested.
  size_t confirmed_count = 0;
  double rate() const {
    return attacker_size == 0 ? 0.0
                              : static_cast<double>(match_count) /
                                    static_cast<double>(attacker_size);
  }
};

// Maximum one-to-one matching on the key. Exact and binned keys pair sorted
// ids within each key value; the age tolerance case picks, among maximum
// matchings, the lexicographically smallest by (attacker id, confidential
// id). Attacker records use only block, sex, age, race and ethnicity.
absl::StatusOr<MatchResult> MatchOneToOne(std::span<const Person> attacker,
                                          const Dataset& confidential,
                                          const KeySpec& key,
                                          bool data_defined_only = false);

// Size of a maximum matching in a bipartite graph given as adjacency lists.
size_t MaximumMatchingSize(const std::vector<std::vector<int>>& adjacency,
                           size_t right_size);

enum class Grouping { kBlockSize, kHomogeneity };

struct GroupRate {
  std::string label;
  size_t persons = 0;    // confidential records in the bin
  size_t matched = 0;
  size_t confirmed = 0;
  double rate = 0;       // matched / persons
};

// Shared bin rules: block size 1-4, 5-9, 10-49, 50+; homogeneity is the
// modal (race, ethnicity) share of the block, binned [0,1/2), [1/2,3/4),
// [3/4,1) and exactly 1.
int BlockSizeBin(size_t block_size);
int HomogeneityBin(size_t modal_count, size_t block_size);
std::string_view GroupLabel(Grouping grouping, int bin);
inline constexpr int kGroupBins = 4;

// Match rates per bin of the grouping. Empty bins are omitted.
std::vector<GroupRate> GroupRates(const MatchResult& result,
                                  std::span<const Person> attacker,
                                  const Dataset& confidential,
                                  Grouping grouping,
                                  bool data_defined_only = false);

}  // namespace sdl

#endif  // SDL_REIDENT_H_
