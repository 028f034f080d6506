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

#ifndef SDL_WORLD_MODEL_H_
#define SDL_WORLD_MODEL_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace sdl {

inline constexpr int kDefaultMaxAge = 115;

// Inclusive age range.
struct AgeBin {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const AgeBin&, const AgeBin&) = default;
};

// A partition of [0, max_age] into contiguous inclusive ranges.
class AgeBinSystem {
 public:
  static absl::StatusOr<AgeBinSystem> Create(std::string name,
                                             std::vector<AgeBin> bins);

  // 0, 1, ..., max_age as separate bins.
  static AgeBinSystem SingleYear(int max_age = kDefaultMaxAge);

  const std::string& name() const { return name_; }
  std::span<const AgeBin> bins() const { return bins_; }
  int size() const { return static_cast<int>(bins_.size()); }
  int max_age() const { return bins_.back().hi; }

  absl::StatusOr<int> BinOf(int age) const;
  // Precondition: 0 <= age <= max_age().
  int BinOfUnchecked(int age) const { return lookup_[age]; }

  // Lower bound of the bin; used wherever an age must be materialized at bin
  // resolution.
  int Representative(int bin) const { return bins_[bin].lo; }

  // True when every bin of `finer` lies inside exactly one bin of this system.
  bool IsCoarseningOf(const AgeBinSystem& finer) const;

  // True when some bin boundary sits exactly at `age` (a bin starts there).
  bool HasBoundaryAt(int age) const;

  friend bool operator==(const AgeBinSystem& a, const AgeBinSystem& b) {
    return a.bins_ == b.bins_;
  }

 private:
  AgeBinSystem(std::string name, std::vector<AgeBin> bins);

  std::string name_;
  std::vector<AgeBin> bins_;
  std::vector<int> lookup_;
};

// 0-17, 18-44, 45-64, 65-115.
AgeBinSystem DeskAgeBins();
// Single years 0..19, then 20, 21, 22-24, five-year bins 25-84, 85-89,
// 90-94, 95-115: 38 bins.
AgeBinSystem MiniSf1AgeBins();
absl::StatusOr<AgeBinSystem> AgeBinPreset(std::string_view name);

enum class Attribute { kBlock, kSex, kAge, kRace, kEthnicity, kSensitive };

std::string_view AttributeName(Attribute attribute);
absl::StatusOr<Attribute> ParseAttribute(std::string_view name);

struct Schema {
  std::string name = "custom";
  int sex_levels = 2;
  AgeBinSystem age_bins = DeskAgeBins();
  int race_levels = 3;
  int ethnicity_levels = 2;
  int sensitive_levels = 2;

  int max_age() const { return age_bins.max_age(); }
  // sex x age bins x race x ethnicity.
  int cells() const {
    return sex_levels * age_bins.size() * race_levels * ethnicity_levels;
  }
  // Number of levels of a categorical attribute. Age reports max_age + 1.
  int Levels(Attribute attribute) const;

  absl::Status Validate() const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.sex_levels == b.sex_levels && a.age_bins == b.age_bins &&
           a.race_levels == b.race_levels &&
           a.ethnicity_levels == b.ethnicity_levels &&
           a.sensitive_levels == b.sensitive_levels;
  }
};

// 2 x 4 x 3 x 2 = 48 cells.
Schema DeskSchema();
// Mini SF1 layout: 2 x 38 x 7 x 2.
Schema MiniSf1Schema();
absl::StatusOr<Schema> SchemaPreset(std::string_view name);

struct Person {
  int64_t id = 0;
  int block = 0;
  int sex = 0;
  int age = 0;
  int race = 0;
  int ethnicity = 0;
  int sensitive = 0;
  bool imputed = false;

  friend bool operator==(const Person&, const Person&) = default;
};

int GetAttribute(const Person& person, Attribute attribute);
void SetAttribute(Person& person, Attribute attribute, int value);

absl::Status ValidatePerson(const Person& person, const Schema& schema);

struct CellTuple {
  int sex = 0;
  int age_bin = 0;
  int race = 0;
  int ethnicity = 0;

  friend bool operator==(const CellTuple&, const CellTuple&) = default;
};

// Mixed-radix encoding with ethnicity varying fastest.
int EncodeCell(const CellTuple& tuple, const Schema& schema);
CellTuple DecodeCell(int cell, const Schema& schema);
absl::StatusOr<int> CellOf(const Person& person, const Schema& schema);

// Confidential microdata plus the block -> region map.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(Schema schema,
                                        std::vector<Person> persons,
                                        std::map<int, int> geography);

  const Schema& schema() const { return *schema_; }
  std::span<const Person> persons() const { return persons_; }
  const std::map<int, int>& geography() const { return geography_; }
  size_t size() const { return persons_.size(); }
  bool empty() const { return persons_.empty(); }

  std::optional<int> RegionOf(int block) const;
  const Person* Find(int64_t id) const;
  std::vector<int> Blocks() const;
  std::vector<int> Regions() const;

  // Copies with one record dropped or substituted. Errors when `id` is absent.
  absl::StatusOr<Dataset> Without(int64_t id) const;
  absl::StatusOr<Dataset> Replacing(const Person& replacement) const;
  absl::StatusOr<Dataset> Adding(const Person& person) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.persons_ == b.persons_ && a.geography_ == b.geography_ &&
           a.schema() == b.schema();
  }

 private:
  Dataset(std::shared_ptr<const Schema> schema, std::vector<Person> persons,
          std::map<int, int> geography)
      : schema_(std::move(schema)),
        persons_(std::move(persons)),
        geography_(std::move(geography)) {}

  std::shared_ptr<const Schema> schema_;
  std::vector<Person> persons_;
  std::map<int, int> geography_;
};

// The record that stands in for a respondent under the blank-replacement
// neighbor convention: same id and block, every other level at zero.
Person BlankRecordFor(const Person& person);

struct BlockSpec {
  int block = 0;
  int region = 0;
  int size = 0;
};

struct HomogeneitySpec {
  int block = 0;
  int cell = 0;
  double weight = 1.0;
};

struct PopulationSpec {
  std::string schema = "desk";
  std::vector<BlockSpec> blocks;
  // One weight per schema cell. Empty means uniform.
  std::vector<double> attribute_distribution;
  std::vector<HomogeneitySpec> homogeneity;
  // One weight per sensitive level. Empty means uniform.
  std::vector<double> sensitive_distribution;
  // Fraction of persons re-drawn as whole-person imputations.
  double imputed_fraction = 0.0;
  uint64_t seed = 0;
};

absl::Status ValidatePopulationSpec(const PopulationSpec& spec,
                                    const Schema& schema);

// Deterministic in the spec. Person ids run 1..n in block order; ages are
// uniform inside the drawn cell's age bin.
absl::StatusOr<Dataset> Generate(const PopulationSpec& spec);
absl::StatusOr<Dataset> Generate(const PopulationSpec& spec,
                                 const Schema& schema);

// Microdata CSV: id,block,sex,age,race,ethnicity,sensitive,imputed.
std::string WriteMicrodataCsv(const Dataset& data);
// Without an explicit geography every block maps to region 0.
absl::StatusOr<Dataset> ReadMicrodataCsv(
    std::string_view text, const Schema& schema,
    std::optional<std::map<int, int>> geography = std::nullopt);

// Attacker CSV: id,block,sex,age,race,ethnicity.
std::string WriteAttackerCsv(std::span<const Person> records);
absl::StatusOr<std::vector<Person>> ReadAttackerCsv(std::string_view text);

}  // namespace sdl

#endif  // SDL_WORLD_MODEL_H_
