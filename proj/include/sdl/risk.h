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

#ifndef SDL_RISK_H_
#define SDL_RISK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/mechanisms.h"
#include "sdl/posterior.h"
#include "sdl/rational.h"

namespace sdl {

enum class Methodology { kAbsLink, kAbs, kPr2PDiff, kPr2PRatio, kCfBayes, kCfFreq };

std::string_view MethodologyName(Methodology m);
absl::StatusOr<Methodology> ParseMethodology(std::string_view name);

// Neighbor convention for the counterfactual world.
enum class CfConvention { kRemoval, kBlank };
// kRealized scores the observed release; kAverage averages each world's
// posterior over its own output distribution; kWorst takes the supremum of
// the contrast over every possible output.
enum class CfMode { kRealized, kAverage, kWorst };

std::string_view CfConventionName(CfConvention c);
absl::StatusOr<CfConvention> ParseCfConvention(std::string_view name);
std::string_view CfModeName(CfMode m);

struct RiskReport {
  Methodology methodology = Methodology::kAbs;
  int64_t target = 0;
  int value = 0;
  // AbsLink on a release without records is not applicable, which is a
  // different answer from zero risk.
  bool not_applicable = false;
  std::optional<Rational> prior;
  std::optional<Rational> posterior;
  std::optional<Rational> posterior_actual;
  std::optional<Rational> posterior_counterfactual;
  std::optional<Rational> difference;
  // nullopt with ratio_unbounded set: the counterfactual rules the output out.
  std::optional<Rational> ratio;
  bool ratio_unbounded = false;
  std::vector<Rational> per_record;
  std::optional<CfConvention> convention;
  std::optional<CfMode> mode;
  std::optional<Rational> exp_epsilon;
  std::string note;

  // max(ratio, 1/ratio); nullopt when unbounded or undefined.
  std::optional<Rational> Contrast() const;
};

struct TradeoffPoint {
  Rational alpha;  // significance level
  Rational power;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  std::optional<Rational> epsilon_bound;  // e^epsilon
  // power <= min(1, e^epsilon * alpha) at every vertex; true without epsilon.
  bool within_bound = true;
};

absl::StatusOr<RiskReport> AbsRiskWithLinking(
    const AttackerModel& attacker, std::span<const Release> releases,
    int64_t target, int value);

absl::StatusOr<RiskReport> AbsRiskWithoutLinking(
    const AttackerModel& attacker, std::span<const Release> releases,
    int64_t target, int value);

// kPr2PDiff or kPr2PRatio. The ratio needs a positive prior.
absl::StatusOr<RiskReport> PriorToPosterior(const AttackerModel& attacker,
                                            std::span<const Release> releases,
                                            int64_t target, int value,
                                            Methodology mode);

// Realized mode. The attacker sees `actual` when the target is in D and
// `counterfactual` when it was removed or blanked; both must come from the
// same mechanism randomness. The target's value is read from the latent
// record in both worlds.
absl::StatusOr<RiskReport> CounterfactualBayes(
    const AttackerModel& attacker, std::span<const Release> actual,
    std::span<const Release> counterfactual, int64_t target, int value,
    CfConvention convention);

// Applies every plan (with its own seed) to the data and to its
// counterfactual, then scores the realized pair.
absl::StatusOr<RiskReport> CounterfactualBayesFromData(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    CfConvention convention);

// kAverage or kWorst over every noise draw. Noise plans are swept over
// their exact output classes, paired so that the counterfactual output is
// the actual one minus the shift in noiseless counts; deterministic plans
// stay at their realized products. Swap plans are not supported.
absl::StatusOr<RiskReport> CounterfactualBayesOverOutputs(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    CfConvention convention, CfMode mode);

// Prior-to-posterior over every noise draw: ratio and difference hold the
// draw with the largest contrast; mode is kWorst.
absl::StatusOr<RiskReport> PriorToPosteriorOverOutputs(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value);

// Most-powerful tests of H0 "counterfactual input" against H1 "actual
// input", one vertex per distinct likelihood ratio.
absl::StatusOr<TradeoffCurve> CounterfactualFreq(
    std::span<const ReleasePlan> plans, const Dataset& actual,
    const Dataset& counterfactual);

enum class Invariant { kNone, kRegionTotal };

// Counterfactual in which the target still reports its true region but may
// alter everything else: each alternative record in that region (any block,
// any option of the attacker's prior) is pushed through the plans with the
// same randomness, and the worst contrast is reported. kNone reduces to
// removal.
absl::StatusOr<RiskReport> InvariantCounterfactual(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    Invariant invariant);

}  // namespace sdl

#endif  // SDL_RISK_H_
