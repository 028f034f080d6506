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


#include "sdl/json_io.h"

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

TEST(JsonTest, RationalsAreExactStrings) {
  EXPECT_EQ(ToJson(MakeRational(2, 6)), Json("1/3"));
  EXPECT_EQ(*RationalFromJson(Json("4/8")), Half());
  EXPECT_EQ(*RationalFromJson(Json(3)), 3);
  EXPECT_FALSE(RationalFromJson(Json(0.5)).ok());
  EXPECT_FALSE(RationalFromJson(Json("1/0")).ok());
}

TEST(JsonTest, SchemaPresetsAndCustom) {
  EXPECT_EQ(*SchemaFromJson(Json("desk")), DeskSchema());
  Schema custom = DeskSchema();
  custom.race_levels = 5;
  custom.age_bins = *AgeBinSystem::Create("two", {{0, 17}, {18, 115}});
  ASSERT_OK_AND_ASSIGN(Schema back, SchemaFromJson(ToJson(custom)));
  EXPECT_EQ(back, custom);
  EXPECT_FALSE(SchemaFromJson(Json("nope")).ok());
}

TEST(JsonTest, PopulationSpecRoundTrip) {
  PopulationSpec spec;
  spec.blocks = {{0, 0, 4}, {3, 1, 2}};
  spec.homogeneity = {{0, 5, 0.5}};
  spec.sensitive_distribution = {0.25, 0.75};
  spec.imputed_fraction = 0.1;
  spec.seed = 77;
  ASSERT_OK_AND_ASSIGN(PopulationSpec back, PopulationSpecFromJson(ToJson(spec)));
  EXPECT_EQ(*Generate(back), *Generate(spec));
}

TEST(JsonTest, TableRoundTripKeepsSuppression) {
  Dataset data = MakeData({P(1, 0, 0, 30), P(2, 1, 1, 40), P(3, 1, 1, 41)});
  TableSpec spec{"sex", GeoLevel::kBlock, {MarginAttribute::kSex}};
  ASSERT_OK_AND_ASSIGN(Table t, Tabulate(data, spec));
  t.mutable_cell(0).reset();
  ASSERT_OK_AND_ASSIGN(Table back, TableFromJson(ToJson(t), data.schema()));
  EXPECT_EQ(back, t);
  const std::string csv = TableToCsv(t);
  EXPECT_NE(csv.find("geo,sex,count"), std::string::npos);
}

TEST(JsonTest, ReleaseRoundTrip) {
  Dataset data = MakeData({P(1, 0, 0, 30), P(2, 1, 1, 40)});
  MechanismSpec spec;
  spec.kind = MechanismKind::kGeometricNoise;
  spec.alpha = MakeRational(1, 3);
  spec.sensitivity = 2;
  spec.seed = 4;
  RecordListSpec layout;
  layout.columns = {Attribute::kBlock, Attribute::kSex};
  const std::vector<ProductTarget> targets = {
      TableSpec{"t", GeoLevel::kBlock, {}}};
  ASSERT_OK_AND_ASSIGN(Release r, Apply(data, spec, targets, "g1"));
  const Json j = ToJson(r);
  EXPECT_EQ(j["epsilon"]["exp"], Json("9/1"));
  ASSERT_OK_AND_ASSIGN(Release back, ReleaseFromJson(j, data.schema()));
  EXPECT_EQ(back.id, "g1");
  EXPECT_EQ(ProductsKey(back.products), ProductsKey(r.products));
  EXPECT_EQ(*back.epsilon, *r.epsilon);
  EXPECT_EQ(back.mechanism.alpha, spec.alpha);
  EXPECT_EQ(*Likelihood(back, data), *Likelihood(r, data));

  const std::vector<ProductTarget> rec = {layout};
  ASSERT_OK_AND_ASSIGN(Release micro, Apply(data, MechanismSpec{}, rec, "m"));
  ASSERT_OK_AND_ASSIGN(Release micro_back, ReleaseFromJson(ToJson(micro), data.schema()));
  ASSERT_NE(micro_back.records(), nullptr);
  EXPECT_EQ(*micro_back.records(), *micro.records());
}

TEST(JsonTest, AttackerRoundTrip) {
  AttackerModel a = MakeAttacker(
      {Candidate(P(1, 0, 0, 30), {MakeRational(1, 10), MakeRational(9, 10)},
                 MakeRational(2, 3)),
       Known(P(2, 1, 1, 40))},
      DeskSchema(), {{0, 0}, {1, 5}});
  ASSERT_OK_AND_ASSIGN(AttackerModel back, AttackerModelFromJson(ToJson(a)));
  EXPECT_EQ(back.universe.size(), 2u);
  EXPECT_EQ(back.geography, a.geography);
  EXPECT_EQ(back.universe[0].inclusion, MakeRational(2, 3));
  EXPECT_EQ(back.universe[0].prior[1].weight, MakeRational(9, 10));
  EXPECT_EQ(back.universe[1].known, a.universe[1].known);
  Json bad = ToJson(a);
  bad["universe"][0]["prior"][0]["weight"] = "1/2";
  EXPECT_FALSE(AttackerModelFromJson(bad).ok());
}

TEST(JsonTest, MalformedInputIsAnError) {
  EXPECT_FALSE(ParseJson("{").ok());
  EXPECT_FALSE(MechanismSpecFromJson(Json::parse(R"({"kind":"unknown"})")).ok());
  EXPECT_FALSE(TableSpecFromJson(Json::parse(R"({"name":"x","geo_level":"planet"})")).ok());
  EXPECT_FALSE(PersonFromJson(Json::parse(R"({"id":"one"})")).ok());
}

TEST(JsonTest, VerdictsSerialize) {
  ASSERT_OK_AND_ASSIGN(auto verdicts, RunAll(42));
  const Json j = ToJson(std::span<const ScenarioVerdict>(verdicts));
  EXPECT_EQ(j["all_match"], Json(true));
  EXPECT_EQ(j["scenarios"].size(), verdicts.size());
  EXPECT_EQ(DumpJson(j), DumpJson(ToJson(std::span<const ScenarioVerdict>(*RunAll(42)))));
  EXPECT_EQ(DumpJson(j).back(), '\n');
}

TEST(CsvTest, TradeoffAndRvr) {
  TradeoffCurve curve;
  curve.points = {{0, 0}, {Half(), 1}};
  EXPECT_EQ(TradeoffCurveToCsv(curve), "alpha,power\n0/1,0/1\n1/2,1/1\n");
  RvrOutcome out;
  out.per_block = {{3, 10, 4, 6}};
  EXPECT_EQ(RvrOutcomeToCsv(out), "block,population,hits,misses\n3,10,4,6\n");
}

}  // namespace
}  // namespace sdl
