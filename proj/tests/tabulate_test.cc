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


#include "sdl/tabulate.h"

#include <map>

#include "gtest/gtest.h"
#include "test_util.h"

namespace sdl {
namespace {

using ::sdl::testing::MakeData;
using ::sdl::testing::P;

TEST(TabulateTest, EmptyDatasetGivesZeros) {
  Dataset data = MakeData({}, DeskSchema(), {0, 1});
  ASSERT_OK_AND_ASSIGN(Table t, Tabulate(data, FullCrossTabSpec(DeskSchema())));
  EXPECT_EQ(t.size(), 2u * 48);
  for (const auto& cell : t.cells()) EXPECT_EQ(cell, 0);
}

TEST(TabulateTest, FullCrossTabIsTheHistogram) {
  PopulationSpec spec;
  spec.blocks = {{0, 0, 25}, {1, 0, 9}, {2, 1, 0}};
  spec.seed = 8;
  ASSERT_OK_AND_ASSIGN(Dataset data, Generate(spec));
  ASSERT_OK_AND_ASSIGN(Table t, Tabulate(data, FullCrossTabSpec(data.schema())));
  std::map<std::pair<int, int>, int64_t> histogram;
  for (const Person& p : data.persons()) {
    ++histogram[{p.block, *CellOf(p, data.schema())}];
  }
  for (size_t g = 0; g < t.geos().size(); ++g) {
    for (int cell = 0; cell < data.schema().cells(); ++cell) {
      const auto it = histogram.find({t.geos()[g], cell});
      EXPECT_EQ(*t.cell(t.Index(g, cell)),
                it == histogram.end() ? 0 : it->second);
    }
  }
}

TEST(TabulateTest, CoarseMarginIsRowSumOfFine) {
  PopulationSpec spec;
  spec.blocks = {{0, 0, 30}, {1, 1, 17}};
  spec.seed = 9;
  ASSERT_OK_AND_ASSIGN(Dataset data, Generate(spec));
  const TableSpec coarse{"sex", GeoLevel::kRegion, {MarginAttribute::kSex}};
  const TableSpec fine{"sex_age", GeoLevel::kRegion,
                       {MarginAttribute::kSex, MarginAttribute::kAgeBin}};
  ASSERT_OK_AND_ASSIGN(Table c, Tabulate(data, coarse));
  ASSERT_OK_AND_ASSIGN(Table f, Tabulate(data, fine));
  const int ages = f.margin_sizes()[1];
  for (size_t g = 0; g < c.geos().size(); ++g) {
    for (int s = 0; s < 2; ++s) {
      int64_t sum = 0;
      for (int a = 0; a < ages; ++a) {
        const std::vector<int> levels = {s, a};
        sum += *f.cell(f.Index(g, f.EncodeTuple(levels)));
      }
      EXPECT_EQ(*c.cell(c.Index(g, s)), sum);
    }
  }
}

TEST(TabulateTest, NationalTotal) {
  Dataset data = MakeData({P(1, 0, 0, 3), P(2, 1, 1, 30), P(3, 1, 0, 70)});
  ASSERT_OK_AND_ASSIGN(Table t,
                       Tabulate(data, TableSpec{"n", GeoLevel::kNational, {}}));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(*t.cell(0), 3);
}

TEST(TabulateTest, TupleOrderIsLastFastest) {
  Table t(TableSpec{"x", GeoLevel::kBlock, {}}, {0}, {2, 3});
  const std::vector<int> levels = {1, 2};
  EXPECT_EQ(t.EncodeTuple(levels), 5u);
  EXPECT_EQ(t.DecodeTuple(4), (std::vector<int>{1, 1}));
}

TEST(TabulateTest, SingleYearTablesUseRawAges) {
  Dataset data = MakeData({P(1, 0, 0, 3), P(2, 0, 1, 3), P(3, 0, 0, 4)});
  TableSpec spec{"age", GeoLevel::kBlock, {MarginAttribute::kAgeBin},
                 AgeBinSystem::SingleYear()};
  ASSERT_OK_AND_ASSIGN(Table t, Tabulate(data, spec));
  EXPECT_EQ(*t.cell(3), 2);
  EXPECT_EQ(*t.cell(4), 1);
  EXPECT_EQ(*t.cell(5), 0);
}

TEST(InvariantTotalsTest, HandCounts) {
  Dataset data =
      MakeData({P(1, 0, 0, 2), P(2, 0, 1, 20), P(3, 0, 0, 44), P(4, 2, 0, 30)},
               DeskSchema(), {1});
  const auto totals = InvariantTotals(data);
  EXPECT_EQ(totals.at(0), (BlockTotals{3, 2}));
  EXPECT_EQ(totals.at(1), (BlockTotals{0, 0}));
  EXPECT_EQ(totals.at(2), (BlockTotals{1, 1}));
}

}  // namespace
}  // namespace sdl
