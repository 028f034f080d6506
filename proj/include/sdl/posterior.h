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

#ifndef SDL_POSTERIOR_H_
#define SDL_POSTERIOR_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/mechanisms.h"
#include "sdl/rational.h"
#include "sdl/world_model.h"

namespace sdl {

// One value assignment for a candidate's unknown attributes.
struct PriorOption {
  std::vector<int> values;  // aligned with CandidatePerson::unknown
  Rational weight;
};

// A person the attacker believes may be in D. Attributes outside `unknown`
// are taken from `known`; the attacker's uncertainty about the rest is the
// categorical `prior`.
struct CandidatePerson {
  Person known;
  std::vector<Attribute> unknown;
  std::vector<PriorOption> prior;
  Rational inclusion = 1;
};

// Attacker information A plus a prior. Priors are independent across
// persons; correlated priors are not supported.
struct AttackerModel {
  std::string name;
  Schema schema;
  std::map<int, int> geography;  // empty: every block in region 0
  std::vector<CandidatePerson> universe;
  bool independent = true;
};

absl::Status ValidateAttacker(const AttackerModel& attacker);

// Index of the candidate with person id `id`.
absl::StatusOr<size_t> CandidateIndex(const AttackerModel& attacker,
                                      int64_t id);

// The candidate's record under prior option `option`.
Person Instantiate(const CandidatePerson& candidate, size_t option);

// How the query target is treated while enumerating worlds.
//   kAsModeled      the attacker's own inclusion belief
//   kForceIncluded  the target is certainly in D
//   kRemoved        the target's record is dropped from D
//   kBlanked        the target's record keeps id and block, all else zeroed
//   kReplaced       the target's record is swapped for `replacement`
// Outside kAsModeled the target's true record stays latent: worlds still
// range over its prior options, so its value can be queried.
struct TargetTreatment {
  enum class Kind { kAsModeled, kForceIncluded, kRemoved, kBlanked, kReplaced };
  Kind kind = Kind::kAsModeled;
  int64_t target = 0;
  Person replacement;
};

// A candidate dataset. `option[i]` is the prior option drawn for candidate
// i, or -1 when the candidate is absent from D.
struct World {
  Rational prior;
  Dataset data;
  std::vector<int> option;
};

// Product of per-person inclusion and option choices, in mixed-radix order
// with the last candidate fastest. nullopt when the count exceeds `cap`.
absl::StatusOr<std::optional<std::vector<World>>> EnumerateWorlds(
    const AttackerModel& attacker, const TargetTreatment& treatment = {},
    size_t cap = kEnumerationCap);

struct WorldPosterior {
  std::vector<World> support;            // positive posterior only
  std::vector<Rational> probability;     // aligned with support
  Rational normalizer;                   // sum of prior x likelihood
};

// Exact posterior over worlds given jointly observed independent releases.
// nullopt means Unavailable (cap). Zero total mass is an error.
absl::StatusOr<std::optional<WorldPosterior>> EnumeratePosterior(
    const AttackerModel& attacker, std::span<const Release> releases,
    const TargetTreatment& treatment = {}, size_t cap = kEnumerationCap);

// Posterior over already enumerated worlds.
absl::StatusOr<std::optional<WorldPosterior>> PosteriorOverWorlds(
    std::vector<World> worlds, std::span<const Release> releases);

// Same, scoring output classes rather than full releases: one class per
// mechanism, evaluated against prepared candidates.
absl::StatusOr<WorldPosterior> PosteriorOverClasses(
    std::span<const World> worlds,
    std::span<const std::vector<PreparedCandidate>> prepared,
    std::span<const OutputClass> classes);

Rational Probability(const WorldPosterior& post,
                     const std::function<bool(const World&)>& event);

// P(target in D and its attribute = value).
absl::StatusOr<Rational> Marginal(const AttackerModel& attacker,
                                  const WorldPosterior& post, int64_t target,
                                  int value,
                                  Attribute attribute = Attribute::kSensitive);

// P(the target's true attribute = value), whether or not it is in D.
absl::StatusOr<Rational> LatentMarginal(
    const AttackerModel& attacker, const WorldPosterior& post, int64_t target,
    int value, Attribute attribute = Attribute::kSensitive);

// Prior P(target in D and attribute = value).
absl::StatusOr<Rational> PriorMarginal(
    const AttackerModel& attacker, int64_t target, int value,
    Attribute attribute = Attribute::kSensitive);

// joint[i] = P(target's attribute = value and released row i is the
// target's record | releases), for the record list in `records_release`.
struct LinkagePosterior {
  std::vector<Rational> joint;
  std::vector<Rational> link;  // P(row i is the target's record)
};

// `releases` must contain `records_release`. Rows are exchangeable among
// equal values, so a row matching m identical protected records belongs to
// each of them with probability 1/m.
absl::StatusOr<std::optional<LinkagePosterior>> ComputeLinkagePosterior(
    const AttackerModel& attacker, std::span<const Release> releases,
    size_t records_release, int64_t target, int value,
    Attribute attribute = Attribute::kSensitive,
    size_t cap = kEnumerationCap);

}  // namespace sdl

#endif  // SDL_POSTERIOR_H_
