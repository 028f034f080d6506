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

#include "sdl/world_model.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "sdl/seeding.h"

namespace sdl {

AgeBinSystem::AgeBinSystem(std::string name, std::vector<AgeBin> bins)
    : name_(std::move(name)), bins_(std::move(bins)) {
  lookup_.resize(bins_.back().hi + 1);
  for (int b = 0; b < static_cast<int>(bins_.size()); ++b) {
    for (int age = bins_[b].lo; age <= bins_[b].hi; ++age) lookup_[age] = b;
  }
}

absl::StatusOr<AgeBinSystem> AgeBinSystem::Create(std::string name,
                                                  std::vector<AgeBin> bins) {
  if (bins.empty()) {
    return absl::InvalidArgumentError("age bin system has no bins");
  }
  int expected_lo = 0;
  for (const AgeBin& bin : bins) {
    if (bin.lo != expected_lo || bin.hi < bin.lo) {
      return absl::InvalidArgumentError(absl::StrCat(
          "age bins must be contiguous from 0; bad bin [", bin.lo, ", ",
          bin.hi, "] in '", std::string(name), "'"));
    }
    expected_lo = bin.hi + 1;
  }
  return AgeBinSystem(std::move(name), std::move(bins));
}

AgeBinSystem AgeBinSystem::SingleYear(int max_age) {
  std::vector<AgeBin> bins;
  for (int age = 0; age <= max_age; ++age) bins.push_back({age, age});
  return AgeBinSystem("single_year", std::move(bins));
}

absl::StatusOr<int> AgeBinSystem::BinOf(int age) const {
  if (age < 0 || age > max_age()) {
    return absl::OutOfRangeError(
        absl::StrCat("age ", age, " outside [0, ", max_age(), "]"));
  }
  return lookup_[age];
}

bool AgeBinSystem::IsCoarseningOf(const AgeBinSystem& finer) const {
  if (finer.max_age() != max_age()) return false;
  for (const AgeBin& bin : finer.bins_) {
    if (lookup_[bin.lo] != lookup_[bin.hi]) return false;
  }
  return true;
}

bool AgeBinSystem::HasBoundaryAt(int age) const {
  return std::any_of(bins_.begin(), bins_.end(),
                     [age](const AgeBin& b) { return b.lo == age; });
}

AgeBinSystem DeskAgeBins() {
  return *AgeBinSystem::Create(
      "desk", {{0, 17}, {18, 44}, {45, 64}, {65, kDefaultMaxAge}});
}

AgeBinSystem MiniSf1AgeBins() {
  std::vector<AgeBin> bins;
  for (int age = 0; age <= 19; ++age) bins.push_back({age, age});
  bins.push_back({20, 20});
  bins.push_back({21, 21});
  bins.push_back({22, 24});
  for (int lo = 25; lo < 85; lo += 5) bins.push_back({lo, lo + 4});
  bins.push_back({85, 89});
  bins.push_back({90, 94});
  bins.push_back({95, kDefaultMaxAge});
  return *AgeBinSystem::Create("mini_sf1", std::move(bins));
}

absl::StatusOr<AgeBinSystem> AgeBinPreset(std::string_view name) {
  if (name == "desk") return DeskAgeBins();
  if (name == "mini_sf1") return MiniSf1AgeBins();
  if (name == "single_year") return AgeBinSystem::SingleYear();
  return absl::InvalidArgumentError(
      absl::StrCat("unknown age bin preset '", std::string(name), "'"));
}

std::string_view AttributeName(Attribute attribute) {
  switch (attribute) {
    case Attribute::kBlock:
      return "block";
    case Attribute::kSex:
      return "sex";
    case Attribute::kAge:
      return "age";
    case Attribute::kRace:
      return "race";
    case Attribute::kEthnicity:
      return "ethnicity";
    case Attribute::kSensitive:
      return "sensitive";
  }
  return "?";
}

absl::StatusOr<Attribute> ParseAttribute(std::string_view name) {
  for (Attribute a : {Attribute::kBlock, Attribute::kSex, Attribute::kAge,
                      Attribute::kRace, Attribute::kEthnicity,
                      Attribute::kSensitive}) {
    if (AttributeName(a) == name) return a;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attribute '", std::string(name), "'"));
}

int Schema::Levels(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kBlock:
      return 0;
    case Attribute::kSex:
      return sex_levels;
    case Attribute::kAge:
      return max_age() + 1;
    case Attribute::kRace:
      return race_levels;
    case Attribute::kEthnicity:
      return ethnicity_levels;
    case Attribute::kSensitive:
      return sensitive_levels;
  }
  return 0;
}

absl::Status Schema::Validate() const {
  if (sex_levels <= 0 || race_levels <= 0 || ethnicity_levels <= 0 ||
      sensitive_levels <= 0) {
    return absl::InvalidArgumentError("schema domains must be non-empty");
  }
  return absl::OkStatus();
}

Schema DeskSchema() {
  Schema schema;
  schema.name = "desk";
  return schema;
}

Schema MiniSf1Schema() {
  Schema schema;
  schema.name = "mini_sf1";
  schema.age_bins = MiniSf1AgeBins();
  schema.race_levels = 7;
  return schema;
}

absl::StatusOr<Schema> SchemaPreset(std::string_view name) {
  if (name == "desk") return DeskSchema();
  if (name == "mini_sf1") return MiniSf1Schema();
  return absl::InvalidArgumentError(
      absl::StrCat("unknown schema preset '", std::string(name), "'"));
}

int GetAttribute(const Person& person, Attribute attribute) {
  switch (attribute) {
    case Attribute::kBlock:
      return person.block;
    case Attribute::kSex:
      return person.sex;
    case Attribute::kAge:
      return person.age;
    case Attribute::kRace:
      return person.race;
    case Attribute::kEthnicity:
      return person.ethnicity;
    case Attribute::kSensitive:
      return person.sensitive;
  }
  return 0;
}

void SetAttribute(Person& person, Attribute attribute, int value) {
  switch (attribute) {
    case Attribute::kBlock:
      person.block = value;
      break;
    case Attribute::kSex:
      person.sex = value;
      break;
    case Attribute::kAge:
      person.age = value;
      break;
    case Attribute::kRace:
      person.race = value;
      break;
    case Attribute::kEthnicity:
      person.ethnicity = value;
      break;
    case Attribute::kSensitive:
      person.sensitive = value;
      break;
  }
}

absl::Status ValidatePerson(const Person& person, const Schema& schema) {
  for (Attribute a : {Attribute::kSex, Attribute::kAge, Attribute::kRace,
                      Attribute::kEthnicity, Attribute::kSensitive}) {
    const int value = GetAttribute(person, a);
    if (value < 0 || value >= schema.Levels(a)) {
      return absl::OutOfRangeError(absl::StrCat(
          "person ", person.id, ": ", std::string(AttributeName(a)), "=", value,
          " outside [0, ", schema.Levels(a), ")"));
    }
  }
  return absl::OkStatus();
}

int EncodeCell(const CellTuple& t, const Schema& s) {
  return ((t.sex * s.age_bins.size() + t.age_bin) * s.race_levels + t.race) *
             s.ethnicity_levels +
         t.ethnicity;
}

CellTuple DecodeCell(int cell, const Schema& s) {
  CellTuple t;
  t.ethnicity = cell % s.ethnicity_levels;
  cell /= s.ethnicity_levels;
  t.race = cell % s.race_levels;
  cell /= s.race_levels;
  t.age_bin = cell % s.age_bins.size();
  t.sex = cell / s.age_bins.size();
  return t;
}

absl::StatusOr<int> CellOf(const Person& person, const Schema& schema) {
  if (absl::Status st = ValidatePerson(person, schema); !st.ok()) return st;
  return EncodeCell({person.sex, schema.age_bins.BinOfUnchecked(person.age),
                     person.race, person.ethnicity},
                    schema);
}

absl::StatusOr<Dataset> Dataset::Create(Schema schema,
                                        std::vector<Person> persons,
                                        std::map<int, int> geography) {
  if (absl::Status st = schema.Validate(); !st.ok()) return st;
  std::set<int64_t> ids;
  for (const Person& p : persons) {
    if (!ids.insert(p.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate person id ", p.id));
    }
    if (!geography.contains(p.block)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "person ", p.id, " lives in block ", p.block,
          " which is missing from the geography"));
    }
    if (absl::Status st = ValidatePerson(p, schema); !st.ok()) return st;
  }
  return Dataset(std::make_shared<const Schema>(std::move(schema)),
                 std::move(persons), std::move(geography));
}

std::optional<int> Dataset::RegionOf(int block) const {
  auto it = geography_.find(block);
  if (it == geography_.end()) return std::nullopt;
  return it->second;
}

const Person* Dataset::Find(int64_t id) const {
  for (const Person& p : persons_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::vector<int> Dataset::Blocks() const {
  std::vector<int> blocks;
  for (const auto& [block, region] : geography_) blocks.push_back(block);
  return blocks;
}

std::vector<int> Dataset::Regions() const {
  std::set<int> regions;
  for (const auto& [block, region] : geography_) regions.insert(region);
  return {regions.begin(), regions.end()};
}

absl::StatusOr<Dataset> Dataset::Without(int64_t id) const {
  std::vector<Person> kept;
  kept.reserve(persons_.size());
  for (const Person& p : persons_) {
    if (p.id != id) kept.push_back(p);
  }
  if (kept.size() == persons_.size()) {
    return absl::NotFoundError(absl::StrCat("no person with id ", id));
  }
  return Dataset(schema_, std::move(kept), geography_);
}

absl::StatusOr<Dataset> Dataset::Replacing(const Person& replacement) const {
  std::vector<Person> persons = persons_;
  auto it = std::find_if(persons.begin(), persons.end(), [&](const Person& p) {
    return p.id == replacement.id;
  });
  if (it == persons.end()) {
    return absl::NotFoundError(
        absl::StrCat("no person with id ", replacement.id));
  }
  *it = replacement;
  return Create(*schema_, std::move(persons), geography_);
}

absl::StatusOr<Dataset> Dataset::Adding(const Person& person) const {
  std::vector<Person> persons = persons_;
  persons.push_back(person);
  return Create(*schema_, std::move(persons), geography_);
}

Person BlankRecordFor(const Person& person) {
  Person blank;
  blank.id = person.id;
  blank.block = person.block;
  return blank;
}

absl::Status ValidatePopulationSpec(const PopulationSpec& spec,
                                    const Schema& schema) {
  if (schema.cells() <= 0) {
    return absl::InvalidArgumentError("schema has an empty domain");
  }
  std::set<int> seen;
  for (const BlockSpec& b : spec.blocks) {
    if (b.size < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("block ", b.block, " has negative size"));
    }
    if (!seen.insert(b.block).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("block ", b.block, " listed twice"));
    }
  }
  auto check_weights = [](std::span<const double> w, size_t expected,
                          std::string_view what) -> absl::Status {
    if (w.empty()) return absl::OkStatus();
    if (w.size() != expected) {
      return absl::InvalidArgumentError(absl::StrCat(
          std::string(what), " has ", w.size(), " weights, expected ", expected));
    }
    double total = 0;
    for (double x : w) {
      if (!(x >= 0)) {
        return absl::InvalidArgumentError(
            absl::StrCat(std::string(what), " has a negative weight"));
      }
      total += x;
    }
    if (total <= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(what), " has zero total weight"));
    }
    return absl::OkStatus();
  };
  if (absl::Status st =
          check_weights(spec.attribute_distribution, schema.cells(),
                        "attribute_distribution");
      !st.ok()) {
    return st;
  }
  if (absl::Status st =
          check_weights(spec.sensitive_distribution, schema.sensitive_levels,
                        "sensitive_distribution");
      !st.ok()) {
    return st;
  }
  for (const HomogeneitySpec& h : spec.homogeneity) {
    if (!seen.contains(h.block)) {
      return absl::InvalidArgumentError(
          absl::StrCat("homogeneity for unknown block ", h.block));
    }
    if (h.cell < 0 || h.cell >= schema.cells()) {
      return absl::OutOfRangeError(
          absl::StrCat("homogeneity cell ", h.cell, " outside schema"));
    }
    if (!(h.weight >= 0 && h.weight <= 1)) {
      return absl::InvalidArgumentError("homogeneity weight outside [0, 1]");
    }
  }
  if (!(spec.imputed_fraction >= 0 && spec.imputed_fraction <= 1)) {
    return absl::InvalidArgumentError("imputed_fraction outside [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> Generate(const PopulationSpec& spec) {
  absl::StatusOr<Schema> schema = SchemaPreset(spec.schema);
  if (!schema.ok()) return schema.status();
  return Generate(spec, *schema);
}

absl::StatusOr<Dataset> Generate(const PopulationSpec& spec,
                                 const Schema& schema) {
  if (absl::Status st = ValidatePopulationSpec(spec, schema); !st.ok()) {
    return st;
  }
  std::vector<double> cell_weights = spec.attribute_distribution;
  if (cell_weights.empty()) cell_weights.assign(schema.cells(), 1.0);
  std::vector<double> sensitive_weights = spec.sensitive_distribution;
  if (sensitive_weights.empty()) {
    sensitive_weights.assign(schema.sensitive_levels, 1.0);
  }
  std::map<int, HomogeneitySpec> homogeneity;
  for (const HomogeneitySpec& h : spec.homogeneity) homogeneity[h.block] = h;

  Rng rng(DeriveSeed(spec.seed, "worldmodel/generate"));
  std::map<int, int> geography;
  std::vector<Person> persons;
  int64_t next_id = 1;
  for (const BlockSpec& b : spec.blocks) {
    geography[b.block] = b.region;
    auto h = homogeneity.find(b.block);
    for (int i = 0; i < b.size; ++i) {
      int cell;
      if (h != homogeneity.end() && rng.Uniform() < h->second.weight) {
        cell = h->second.cell;
      } else {
        cell = static_cast<int>(rng.Categorical(cell_weights));
      }
      const CellTuple t = DecodeCell(cell, schema);
      const AgeBin bin = schema.age_bins.bins()[t.age_bin];
      Person p;
      p.id = next_id++;
      p.block = b.block;
      p.sex = t.sex;
      p.age = bin.lo + static_cast<int>(rng.Below(bin.hi - bin.lo + 1));
      p.race = t.race;
      p.ethnicity = t.ethnicity;
      p.sensitive = static_cast<int>(rng.Categorical(sensitive_weights));
      persons.push_back(p);
    }
  }

  // Whole-person imputation post-pass: copy every characteristic from a
  // random other resident of the same block.
  if (spec.imputed_fraction > 0) {
    Rng impute_rng(DeriveSeed(spec.seed, "worldmodel/impute"));
    std::map<int, std::vector<size_t>> by_block;
    for (size_t i = 0; i < persons.size(); ++i) {
      by_block[persons[i].block].push_back(i);
    }
    const std::vector<Person> original = persons;
    for (size_t i = 0; i < persons.size(); ++i) {
      if (!(impute_rng.Uniform() < spec.imputed_fraction)) continue;
      const std::vector<size_t>& members = by_block[persons[i].block];
      persons[i].imputed = true;
      if (members.size() < 2) continue;
      size_t donor;
      do {
        donor = members[impute_rng.Below(members.size())];
      } while (donor == i);
      const Person& d = original[donor];
      persons[i].sex = d.sex;
      persons[i].age = d.age;
      persons[i].race = d.race;
      persons[i].ethnicity = d.ethnicity;
      persons[i].sensitive = d.sensitive;
    }
  }
  return Dataset::Create(schema, std::move(persons), std::move(geography));
}

namespace {

constexpr std::string_view kMicrodataHeader =
    "id,block,sex,age,race,ethnicity,sensitive,imputed";
constexpr std::string_view kAttackerHeader = "id,block,sex,age,race,ethnicity";

absl::StatusOr<std::vector<std::vector<int64_t>>> ParseIntegerCsv(
    std::string_view text, std::string_view header) {
  std::vector<std::string> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != header) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected CSV header '", std::string(header), "'"));
  }
  const size_t columns = std::count(header.begin(), header.end(), ',') + 1;
  std::vector<std::vector<int64_t>> rows;
  for (size_t line = 1; line < lines.size(); ++line) {
    std::vector<std::string> fields = absl::StrSplit(lines[line], ',');
    if (fields.size() != columns) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line + 1, ": expected ", columns, " fields, got ",
          fields.size()));
    }
    std::vector<int64_t> row;
    for (std::string_view f : fields) {
      int64_t v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line + 1, ": '", std::string(f), "' is not an integer"));
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string WriteMicrodataCsv(const Dataset& data) {
  std::ostringstream out;
  out << kMicrodataHeader << '\n';
  for (const Person& p : data.persons()) {
    out << p.id << ',' << p.block << ',' << p.sex << ',' << p.age << ','
        << p.race << ',' << p.ethnicity << ',' << p.sensitive << ','
        << (p.imputed ? 1 : 0) << '\n';
  }
  return out.str();
}

absl::StatusOr<Dataset> ReadMicrodataCsv(
    std::string_view text, const Schema& schema,
    std::optional<std::map<int, int>> geography) {
  absl::StatusOr<std::vector<std::vector<int64_t>>> rows =
      ParseIntegerCsv(text, kMicrodataHeader);
  if (!rows.ok()) return rows.status();
  std::vector<Person> persons;
  std::map<int, int> geo;
  if (geography) geo = *geography;
  for (const auto& r : *rows) {
    Person p;
    p.id = r[0];
    p.block = static_cast<int>(r[1]);
    p.sex = static_cast<int>(r[2]);
    p.age = static_cast<int>(r[3]);
    p.race = static_cast<int>(r[4]);
    p.ethnicity = static_cast<int>(r[5]);
    p.sensitive = static_cast<int>(r[6]);
    p.imputed = r[7] != 0;
    if (!geography) geo.emplace(p.block, 0);
    persons.push_back(p);
  }
  return Dataset::Create(schema, std::move(persons), std::move(geo));
}

std::string WriteAttackerCsv(std::span<const Person> records) {
  std::ostringstream out;
  out << kAttackerHeader << '\n';
  for (const Person& p : records) {
    out << p.id << ',' << p.block << ',' << p.sex << ',' << p.age << ','
        << p.race << ',' << p.ethnicity << '\n';
  }
  return out.str();
}

absl::StatusOr<std::vector<Person>> ReadAttackerCsv(std::string_view text) {
  absl::StatusOr<std::vector<std::vector<int64_t>>> rows =
      ParseIntegerCsv(text, kAttackerHeader);
  if (!rows.ok()) return rows.status();
  std::vector<Person> records;
  for (const auto& r : *rows) {
    Person p;
    p.id = r[0];
    p.block = static_cast<int>(r[1]);
    p.sex = static_cast<int>(r[2]);
    p.age = static_cast<int>(r[3]);
    p.race = static_cast<int>(r[4]);
    p.ethnicity = static_cast<int>(r[5]);
    records.push_back(p);
  }
  return records;
}

}  // namespace sdl
