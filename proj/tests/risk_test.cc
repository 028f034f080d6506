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


#include "sdl/risk.h"

#include "gtest/gtest.h"
#include "test_util.h"

namespace sdl {
namespace {

using ::sdl::testing::Candidate;
using ::sdl::testing::Half;
using ::sdl::testing::Known;
using ::sdl::testing::MakeAttacker;
using ::sdl::testing::MakeData;
using ::sdl::testing::P;

Person S(Person p, int s) {
  p.sensitive = s;
  return p;
}

const TableSpec kBySensitive{"sensitive", GeoLevel::kBlock,
                             {MarginAttribute::kSensitive}};
const TableSpec kRegionTotal{"region_total", GeoLevel::kRegion, {}};

MechanismSpec Geometric(Rational alpha, int sensitivity = 1,
                        uint64_t seed = 5) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kGeometricNoise;
  spec.alpha = std::move(alpha);
  spec.sensitivity = sensitivity;
  spec.seed = seed;
  return spec;
}

MechanismSpec Perturbed() {
  MechanismSpec spec;
  spec.kind = MechanismKind::kPerturbedTotal;
  spec.alpha = MakeRational(99, 100);
  spec.seed = 17;
  return spec;
}

// Target 1 is uncertain; the neighbor 2 is known to the attacker.
struct World2 {
  AttackerModel attacker;
  Dataset data;
};

World2 Pair(Rational prior_one) {
  const Rational rest = 1 - prior_one;
  return {MakeAttacker({Candidate(P(1, 0, 0, 30), {rest, prior_one}),
                        Known(S(P(2, 0, 1, 40), 0))}),
          MakeData({S(P(1, 0, 0, 30), 1), S(P(2, 0, 1, 40), 0)})};
}

TEST(AbsLinkTest, TablesAreNotApplicable) {
  World2 w = Pair(Half());
  const std::vector<ProductTarget> targets = {kBySensitive};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, MechanismSpec{}, targets));
  const std::vector<Release> releases = {r};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, AbsRiskWithLinking(w.attacker, releases, 1, 1));
  EXPECT_TRUE(rep.not_applicable);
  EXPECT_FALSE(rep.posterior.has_value());
}

TEST(AbsLinkTest, UniqueRecordsGiveJointOne) {
  World2 w = Pair(Half());
  const std::vector<ProductTarget> targets = {RecordListSpec{}};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, MechanismSpec{}, targets));
  const std::vector<Release> releases = {r};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, AbsRiskWithLinking(w.attacker, releases, 1, 1));
  EXPECT_FALSE(rep.not_applicable);
  EXPECT_EQ(*rep.posterior, 1);
  ASSERT_OK_AND_ASSIGN(RiskReport abs, AbsRiskWithoutLinking(w.attacker, releases, 1, 1));
  EXPECT_LE(*rep.posterior, *abs.posterior);
}

TEST(AbsTest, UninformativeReleaseLeavesAHighPrior) {
  World2 w = Pair(MakeRational(9, 10));
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, Perturbed(), {}));
  const std::vector<Release> releases = {r};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, AbsRiskWithoutLinking(w.attacker, releases, 1, 1));
  EXPECT_EQ(*rep.posterior, MakeRational(9, 10));
}

TEST(AbsTest, IdentityRevealsTheTruth) {
  World2 w = Pair(Half());
  const std::vector<ProductTarget> targets = {kBySensitive};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, MechanismSpec{}, targets));
  const std::vector<Release> releases = {r};
  EXPECT_EQ(*AbsRiskWithoutLinking(w.attacker, releases, 1, 1)->posterior, 1);
  EXPECT_EQ(*AbsRiskWithoutLinking(w.attacker, releases, 1, 0)->posterior, 0);
}

TEST(AbsTest, ZeroPriorStaysZero) {
  World2 w = Pair(MakeRational(0));
  w.data = MakeData({S(P(1, 0, 0, 30), 0), S(P(2, 0, 1, 40), 0)});
  MechanismSpec spec = Geometric(Half());
  const std::vector<ProductTarget> targets = {kBySensitive};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, spec, targets));
  const std::vector<Release> releases = {r};
  EXPECT_EQ(*AbsRiskWithoutLinking(w.attacker, releases, 1, 1)->posterior, 0);
}

TEST(Pr2PTest, UninformativeIsExactlyZero) {
  World2 w = Pair(MakeRational(9, 10));
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, Perturbed(), {}));
  const std::vector<Release> releases = {r};
  ASSERT_OK_AND_ASSIGN(RiskReport diff, PriorToPosterior(w.attacker, releases, 1, 1, Methodology::kPr2PDiff));
  ASSERT_OK_AND_ASSIGN(RiskReport ratio, PriorToPosterior(w.attacker, releases, 1, 1, Methodology::kPr2PRatio));
  EXPECT_EQ(*diff.difference, 0);
  EXPECT_EQ(*ratio.ratio, 1);
}

TEST(Pr2PTest, IdentityWithAHalfPrior) {
  World2 w = Pair(Half());
  const std::vector<ProductTarget> targets = {kBySensitive};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, MechanismSpec{}, targets));
  const std::vector<Release> releases = {r};
  ASSERT_OK_AND_ASSIGN(RiskReport diff, PriorToPosterior(w.attacker, releases, 1, 1, Methodology::kPr2PDiff));
  ASSERT_OK_AND_ASSIGN(RiskReport ratio, PriorToPosterior(w.attacker, releases, 1, 1, Methodology::kPr2PRatio));
  EXPECT_EQ(*diff.difference, Half());
  EXPECT_EQ(*ratio.ratio, 2);
  EXPECT_EQ(*ratio.Contrast(), 2);
}

TEST(Pr2PTest, RatioNeedsAPositivePrior) {
  World2 w = Pair(MakeRational(0));
  w.data = MakeData({S(P(1, 0, 0, 30), 0), S(P(2, 0, 1, 40), 0)});
  ASSERT_OK_AND_ASSIGN(Release r, Apply(w.data, Perturbed(), {}));
  const std::vector<Release> releases = {r};
  EXPECT_FALSE(PriorToPosterior(w.attacker, releases, 1, 1, Methodology::kPr2PRatio).ok());
}

TEST(CfBayesTest, DataIndependentReleaseGivesOne) {
  World2 w = Pair(MakeRational(9, 10));
  const std::vector<ReleasePlan> plans = {{Perturbed(), {}}};
  for (CfConvention c : {CfConvention::kRemoval, CfConvention::kBlank}) {
    ASSERT_OK_AND_ASSIGN(RiskReport rep, CounterfactualBayesFromData(w.attacker, w.data, plans, 1, 1, c));
    EXPECT_EQ(*rep.ratio, 1);
    EXPECT_EQ(*rep.posterior_actual, MakeRational(9, 10));
  }
}

// A changed sensitive value moves two cells of the histogram, so the
// posterior contrast is bounded by (1/alpha)^2 and the release declares
// sensitivity 2.
TEST(CfBayesTest, GeometricRealizedRatioWithinBoundForEverySeed) {
  World2 w = Pair(Half());
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const std::vector<ReleasePlan> plans = {
        {Geometric(Half(), 2, seed), {kBySensitive}}};
    ASSERT_OK_AND_ASSIGN(RiskReport rep, CounterfactualBayesFromData(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval));
    ASSERT_TRUE(rep.ratio.has_value());
    EXPECT_LE(*rep.Contrast(), 4) << "seed " << seed;
    EXPECT_EQ(*rep.exp_epsilon, 4);
  }
}

TEST(CfBayesTest, WorstOverOutputsIsWithinBound) {
  World2 w = Pair(MakeRational(1, 3));
  const std::vector<ReleasePlan> plans = {{Geometric(Half(), 2), {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(RiskReport worst, CounterfactualBayesOverOutputs(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval, CfMode::kWorst));
  ASSERT_TRUE(worst.Contrast().has_value());
  EXPECT_LE(*worst.Contrast(), 4);
  EXPECT_GT(*worst.Contrast(), 1);
  ASSERT_OK_AND_ASSIGN(RiskReport avg, CounterfactualBayesOverOutputs(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval, CfMode::kAverage));
  EXPECT_LE(*avg.Contrast(), *worst.Contrast());
}

// Hand value: prior 1/3, worst output pushes the posterior to 1/9.
TEST(CfBayesTest, WorstContrastHandValue) {
  World2 w = Pair(MakeRational(1, 3));
  const std::vector<ReleasePlan> plans = {{Geometric(Half(), 2), {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(RiskReport worst, CounterfactualBayesOverOutputs(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval, CfMode::kWorst));
  EXPECT_EQ(*worst.Contrast(), 3);
}

TEST(CfBayesTest, RemovalOfARecordListWithKnownNeighbor) {
  World2 w = Pair(Half());
  const std::vector<ReleasePlan> plans = {{MechanismSpec{}, {RecordListSpec{}}}};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, CounterfactualBayesFromData(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval));
  // Without the record the release says nothing about s_1: 1 against 1/2.
  EXPECT_EQ(*rep.posterior_actual, 1);
  EXPECT_EQ(*rep.posterior_counterfactual, Half());
  EXPECT_EQ(*rep.ratio, 2);
}

TEST(CfBayesTest, SwapPlansAreRejectedInSweeps) {
  World2 w = Pair(Half());
  MechanismSpec swap;
  swap.kind = MechanismKind::kSwap;
  swap.swap_rate = Half();
  const std::vector<ReleasePlan> plans = {{swap, {kBySensitive}}};
  EXPECT_FALSE(CounterfactualBayesOverOutputs(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval, CfMode::kWorst).ok());
}

TEST(CfFreqTest, IdenticalInputsGiveTheBlindTest) {
  World2 w = Pair(Half());
  const std::vector<ReleasePlan> plans = {{Geometric(Half()), {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(TradeoffCurve curve, CounterfactualFreq(plans, w.data, w.data));
  for (const TradeoffPoint& p : curve.points) EXPECT_EQ(p.power, p.alpha);
}

TEST(CfFreqTest, IdentityGivesAPerfectTest) {
  World2 w = Pair(Half());
  ASSERT_OK_AND_ASSIGN(Dataset cf, w.data.Without(1));
  const std::vector<ReleasePlan> plans = {{MechanismSpec{}, {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(TradeoffCurve curve, CounterfactualFreq(plans, w.data, cf));
  bool perfect = false;
  for (const TradeoffPoint& p : curve.points) perfect |= p.alpha == 0 && p.power == 1;
  EXPECT_TRUE(perfect);
  EXPECT_FALSE(curve.epsilon_bound.has_value());
}

TEST(CfFreqTest, GeometricPowerIsAtMostTwiceTheLevel) {
  World2 w = Pair(Half());
  ASSERT_OK_AND_ASSIGN(Dataset cf, w.data.Without(1));
  const std::vector<ReleasePlan> plans = {{Geometric(Half()), {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(TradeoffCurve curve, CounterfactualFreq(plans, w.data, cf));
  EXPECT_TRUE(curve.within_bound);
  EXPECT_EQ(*curve.epsilon_bound, 2);
  for (const TradeoffPoint& p : curve.points) {
    EXPECT_LE(p.power, 2 * p.alpha);
    EXPECT_LE(p.power, 1);
  }
  EXPECT_EQ(curve.points.back().alpha, 1);
  EXPECT_EQ(curve.points.back().power, 1);
}

// Two blocks in region 0, one in region 1. The target lives in block 0.
World2 Regional() {
  std::map<int, int> geo = {{0, 0}, {1, 0}, {2, 1}};
  AttackerModel a = MakeAttacker(
      {Candidate(P(1, 0, 0, 30), {Half(), Half()}), Known(S(P(2, 1, 1, 40), 0)),
       Known(S(P(3, 2, 0, 50), 1))},
      DeskSchema(), geo);
  Dataset d = *Dataset::Create(
      DeskSchema(), {S(P(1, 0, 0, 30), 1), S(P(2, 1, 1, 40), 0), S(P(3, 2, 0, 50), 1)},
      geo);
  return {a, d};
}

TEST(InvariantTest, ExactRegionTotalsAreInvariant) {
  World2 w = Regional();
  const std::vector<ReleasePlan> plans = {{MechanismSpec{}, {kRegionTotal}}};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, InvariantCounterfactual(w.attacker, w.data, plans, 1, 1, Invariant::kRegionTotal));
  ASSERT_TRUE(rep.ratio.has_value());
  EXPECT_EQ(*rep.Contrast(), 1);
}

TEST(InvariantTest, ExactMicrodataIsFlagged) {
  World2 w = Regional();
  const std::vector<ReleasePlan> plans = {{MechanismSpec{}, {RecordListSpec{}}}};
  ASSERT_OK_AND_ASSIGN(RiskReport rep, InvariantCounterfactual(w.attacker, w.data, plans, 1, 1, Invariant::kRegionTotal));
  EXPECT_TRUE(rep.ratio_unbounded || *rep.Contrast() > 1);
}

TEST(InvariantTest, NoInvariantReducesToRemoval) {
  World2 w = Regional();
  const std::vector<ReleasePlan> plans = {{Geometric(Half()), {kBySensitive}}};
  ASSERT_OK_AND_ASSIGN(RiskReport inv, InvariantCounterfactual(w.attacker, w.data, plans, 1, 1, Invariant::kNone));
  ASSERT_OK_AND_ASSIGN(RiskReport rem, CounterfactualBayesFromData(w.attacker, w.data, plans, 1, 1, CfConvention::kRemoval));
  EXPECT_EQ(inv.ratio, rem.ratio);
  EXPECT_EQ(inv.posterior_actual, rem.posterior_actual);
}

TEST(ReportTest, ContrastFoldsRatios) {
  RiskReport r;
  r.ratio = MakeRational(1, 4);
  EXPECT_EQ(*r.Contrast(), 4);
  r.ratio_unbounded = true;
  r.ratio.reset();
  EXPECT_FALSE(r.Contrast().has_value());
}

TEST(NamesTest, RoundTrip) {
  for (Methodology m : {Methodology::kAbsLink, Methodology::kAbs, Methodology::kPr2PDiff,
                        Methodology::kPr2PRatio, Methodology::kCfBayes, Methodology::kCfFreq}) {
    EXPECT_EQ(*ParseMethodology(MethodologyName(m)), m);
  }
  EXPECT_FALSE(ParseMethodology("bogus").ok());
  EXPECT_EQ(*ParseCfConvention("blank"), CfConvention::kBlank);
}

}  // namespace
}  // namespace sdl
