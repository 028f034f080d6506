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

#include <set>

#include "absl/strings/str_cat.h"

namespace sdl {

std::string_view GeoLevelName(GeoLevel level) {
  switch (level) {
    case GeoLevel::kNational:
      return "national";
    case GeoLevel::kRegion:
      return "region";
    case GeoLevel::kBlock:
      return "block";
  }
  return "?";
}

absl::StatusOr<GeoLevel> ParseGeoLevel(std::string_view name) {
  for (GeoLevel l : {GeoLevel::kNational, GeoLevel::kRegion, GeoLevel::kBlock}) {
    if (GeoLevelName(l) == name) return l;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown geography level '", std::string(name), "'"));
}

std::string_view MarginAttributeName(MarginAttribute attribute) {
  switch (attribute) {
    case MarginAttribute::kSex:
      return "sex";
    case MarginAttribute::kAgeBin:
      return "age_bin";
    case MarginAttribute::kRace:
      return "race";
    case MarginAttribute::kEthnicity:
      return "ethnicity";
    case MarginAttribute::kSensitive:
      return "sensitive";
  }
  return "?";
}

absl::StatusOr<MarginAttribute> ParseMarginAttribute(std::string_view name) {
  for (MarginAttribute a :
       {MarginAttribute::kSex, MarginAttribute::kAgeBin, MarginAttribute::kRace,
        MarginAttribute::kEthnicity, MarginAttribute::kSensitive}) {
    if (MarginAttributeName(a) == name) return a;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown margin attribute '", std::string(name), "'"));
}

int MarginLevels(MarginAttribute attribute, const TableSpec& spec,
                 const Schema& schema) {
  switch (attribute) {
    case MarginAttribute::kSex:
      return schema.sex_levels;
    case MarginAttribute::kAgeBin:
      return spec.age_bins.size();
    case MarginAttribute::kRace:
      return schema.race_levels;
    case MarginAttribute::kEthnicity:
      return schema.ethnicity_levels;
    case MarginAttribute::kSensitive:
      return schema.sensitive_levels;
  }
  return 0;
}

int MarginValue(const Person& person, MarginAttribute attribute,
                const TableSpec& spec) {
  switch (attribute) {
    case MarginAttribute::kSex:
      return person.sex;
    case MarginAttribute::kAgeBin:
      return spec.age_bins.BinOfUnchecked(person.age);
    case MarginAttribute::kRace:
      return person.race;
    case MarginAttribute::kEthnicity:
      return person.ethnicity;
    case MarginAttribute::kSensitive:
      return person.sensitive;
  }
  return 0;
}

Table::Table(TableSpec spec, std::vector<int> geos,
             std::vector<int> margin_sizes)
    : spec_(std::move(spec)),
      geos_(std::move(geos)),
      margin_sizes_(std::move(margin_sizes)) {
  for (int s : margin_sizes_) tuples_per_geo_ *= s;
  cells_.assign(geos_.size() * tuples_per_geo_, int64_t{0});
}

std::optional<size_t> Table::GeoIndex(int geo) const {
  auto it = std::lower_bound(geos_.begin(), geos_.end(), geo);
  if (it == geos_.end() || *it != geo) return std::nullopt;
  return static_cast<size_t>(it - geos_.begin());
}

size_t Table::EncodeTuple(std::span<const int> levels) const {
  size_t tuple = 0;
  for (size_t i = 0; i < margin_sizes_.size(); ++i) {
    tuple = tuple * margin_sizes_[i] + levels[i];
  }
  return tuple;
}

std::vector<int> Table::DecodeTuple(size_t tuple) const {
  std::vector<int> levels(margin_sizes_.size());
  for (size_t i = margin_sizes_.size(); i-- > 0;) {
    levels[i] = static_cast<int>(tuple % margin_sizes_[i]);
    tuple /= margin_sizes_[i];
  }
  return levels;
}

std::vector<int> GeographiesOf(const Dataset& data, GeoLevel level) {
  switch (level) {
    case GeoLevel::kNational:
      return {0};
    case GeoLevel::kRegion:
      return data.Regions();
    case GeoLevel::kBlock:
      return data.Blocks();
  }
  return {};
}

int GeoOf(const Person& person, GeoLevel level, const Dataset& data) {
  switch (level) {
    case GeoLevel::kNational:
      return 0;
    case GeoLevel::kRegion:
      return *data.RegionOf(person.block);
    case GeoLevel::kBlock:
      return person.block;
  }
  return 0;
}

absl::StatusOr<Table> Tabulate(const Dataset& data, const TableSpec& spec) {
  const Schema& schema = data.schema();
  if (spec.age_bins.max_age() != schema.max_age()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "table '", spec.name, "' age bins cover [0, ", spec.age_bins.max_age(),
        "] but the schema covers [0, ", schema.max_age(), "]"));
  }
  std::set<MarginAttribute> distinct(spec.margin.begin(), spec.margin.end());
  if (distinct.size() != spec.margin.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("table '", spec.name, "' repeats a margin attribute"));
  }
  std::vector<int> sizes;
  for (MarginAttribute a : spec.margin) {
    sizes.push_back(MarginLevels(a, spec, schema));
  }
  Table table(spec, GeographiesOf(data, spec.geo_level), std::move(sizes));
  std::vector<int> levels(spec.margin.size());
  for (const Person& p : data.persons()) {
    for (size_t i = 0; i < spec.margin.size(); ++i) {
      levels[i] = MarginValue(p, spec.margin[i], spec);
    }
    const size_t geo = *table.GeoIndex(GeoOf(p, spec.geo_level, data));
    ++*table.mutable_cell(table.Index(geo, table.EncodeTuple(levels)));
  }
  return table;
}

std::map<int, BlockTotals> InvariantTotals(const Dataset& data,
                                           int voting_age_threshold) {
  std::map<int, BlockTotals> totals;
  for (int block : data.Blocks()) totals[block] = {};
  for (const Person& p : data.persons()) {
    BlockTotals& t = totals[p.block];
    ++t.population;
    if (p.age >= voting_age_threshold) ++t.voting_age;
  }
  return totals;
}

TableSpec FullCrossTabSpec(const Schema& schema, std::string name) {
  TableSpec spec;
  spec.name = std::move(name);
  spec.geo_level = GeoLevel::kBlock;
  spec.margin = {MarginAttribute::kSex, MarginAttribute::kAgeBin,
                 MarginAttribute::kRace, MarginAttribute::kEthnicity};
  spec.age_bins = schema.age_bins;
  return spec;
}

}  // namespace sdl
