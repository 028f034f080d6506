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

#ifndef SDL_TABULATE_H_
#define SDL_TABULATE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/world_model.h"

namespace sdl {

enum class GeoLevel { kNational, kRegion, kBlock };

enum class MarginAttribute { kSex, kAgeBin, kRace, kEthnicity, kSensitive };

std::string_view GeoLevelName(GeoLevel level);
absl::StatusOr<GeoLevel> ParseGeoLevel(std::string_view name);
std::string_view MarginAttributeName(MarginAttribute attribute);
absl::StatusOr<MarginAttribute> ParseMarginAttribute(std::string_view name);

struct TableSpec {
  std::string name;
  GeoLevel geo_level = GeoLevel::kBlock;
  // Empty margin means a pure population total per geography.
  std::vector<MarginAttribute> margin;
  AgeBinSystem age_bins = DeskAgeBins();

  friend bool operator==(const TableSpec& a, const TableSpec& b) {
    return a.name == b.name && a.geo_level == b.geo_level &&
           a.margin == b.margin && a.age_bins == b.age_bins;
  }
};

// Number of levels of one margin attribute under a table spec and schema.
int MarginLevels(MarginAttribute attribute, const TableSpec& spec,
                 const Schema& schema);
int MarginValue(const Person& person, MarginAttribute attribute,
                const TableSpec& spec);

// A dense table over (geography, margin tuple). Cells are stored geo-major and
// the margin tuple uses mixed radix with the last margin attribute varying
// fastest, so flat order is the lexicographic (geo, margin) order. A cell is
// nullopt when a mechanism suppressed it.
class Table {
 public:
  Table(TableSpec spec, std::vector<int> geos, std::vector<int> margin_sizes);

  const TableSpec& spec() const { return spec_; }
  std::span<const int> geos() const { return geos_; }
  std::span<const int> margin_sizes() const { return margin_sizes_; }
  size_t tuples_per_geo() const { return tuples_per_geo_; }
  size_t size() const { return cells_.size(); }

  std::optional<size_t> GeoIndex(int geo) const;
  size_t Index(size_t geo_index, size_t tuple) const {
    return geo_index * tuples_per_geo_ + tuple;
  }
  size_t EncodeTuple(std::span<const int> levels) const;
  std::vector<int> DecodeTuple(size_t tuple) const;

  const std::optional<int64_t>& cell(size_t index) const {
    return cells_[index];
  }
  std::optional<int64_t>& mutable_cell(size_t index) { return cells_[index]; }
  std::span<const std::optional<int64_t>> cells() const { return cells_; }

  friend bool operator==(const Table& a, const Table& b) {
    return a.spec_ == b.spec_ && a.geos_ == b.geos_ && a.cells_ == b.cells_;
  }

 private:
  TableSpec spec_;
  std::vector<int> geos_;
  std::vector<int> margin_sizes_;
  size_t tuples_per_geo_ = 1;
  std::vector<std::optional<int64_t>> cells_;
};

// Geography ids a table spec ranges over: sorted blocks, sorted regions or {0}.
std::vector<int> GeographiesOf(const Dataset& data, GeoLevel level);
int GeoOf(const Person& person, GeoLevel level, const Dataset& data);

absl::StatusOr<Table> Tabulate(const Dataset& data, const TableSpec& spec);

struct BlockTotals {
  int64_t population = 0;
  int64_t voting_age = 0;

  friend bool operator==(const BlockTotals&, const BlockTotals&) = default;
};

// Every block in the geography gets an entry, empty blocks included.
std::map<int, BlockTotals> InvariantTotals(const Dataset& data,
                                           int voting_age_threshold = 18);

// A block-level table over the full schema cross product.
TableSpec FullCrossTabSpec(const Schema& schema, std::string name = "full");

}  // namespace sdl

#endif  // SDL_TABULATE_H_
