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

#include "sdl/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "sdl/seeding.h"

namespace sdl {
namespace {

TableSpec NationalTotalSpec() {
  TableSpec spec;
  spec.name = "national_total";
  spec.geo_level = GeoLevel::kNational;
  return spec;
}

void SuppressTable(Table& table, int threshold, bool complementary) {
  const size_t width = table.tuples_per_geo();
  for (size_t g = 0; g < table.geos().size(); ++g) {
    bool any_primary = false;
    for (size_t t = 0; t < width; ++t) {
      std::optional<int64_t>& c = table.mutable_cell(table.Index(g, t));
      if (c && *c > 0 && *c < threshold) {
        c.reset();
        any_primary = true;
      }
    }
    if (!any_primary || !complementary) continue;
    // Complement: the smallest remaining nonzero cell of the row, lowest
    // index on ties.
    std::optional<size_t> pick;
    for (size_t t = 0; t < width; ++t) {
      const std::optional<int64_t>& c = table.cell(table.Index(g, t));
      if (!c || *c == 0) continue;
      if (!pick || *c < *table.cell(table.Index(g, *pick))) pick = t;
    }
    if (pick) table.mutable_cell(table.Index(g, *pick)).reset();
  }
}

// Greedy deterministic pairing inside each swap-key group: each selected
// record is paired with the next selected record sharing its key but living
// in another block; partners exchange blocks.
Dataset SwapSelected(const Dataset& data, const MechanismSpec& spec,
                     const std::vector<bool>& selected) {
  std::vector<Person> persons(data.persons().begin(), data.persons().end());
  std::map<std::vector<int>, std::vector<size_t>> groups;
  for (size_t i = 0; i < persons.size(); ++i) {
    if (!selected[i]) continue;
    std::vector<int> key;
    for (Attribute a : spec.swap_keys) key.push_back(GetAttribute(persons[i], a));
    groups[key].push_back(i);
  }
  for (auto& [key, members] : groups) {
    std::vector<bool> paired(members.size(), false);
    for (size_t a = 0; a < members.size(); ++a) {
      if (paired[a]) continue;
      for (size_t b = a + 1; b < members.size(); ++b) {
        if (paired[b]) continue;
        Person& p = persons[members[a]];
        Person& q = persons[members[b]];
        if (p.block == q.block) continue;
        std::swap(p.block, q.block);
        paired[a] = paired[b] = true;
        break;
      }
    }
  }
  return *Dataset::Create(data.schema(), std::move(persons), data.geography());
}

absl::Status CheckTargets(const MechanismSpec& spec,
                          std::span<const ProductTarget> targets) {
  if (targets.empty() && spec.kind != MechanismKind::kPerturbedTotal) {
    return absl::InvalidArgumentError("a release needs at least one target");
  }
  for (const ProductTarget& t : targets) {
    const bool is_records = std::holds_alternative<RecordListSpec>(t);
    if (is_records) {
      if (IsNoiseKind(spec.kind) || spec.kind == MechanismKind::kSuppress) {
        return absl::InvalidArgumentError(
            absl::StrCat(std::string(MechanismKindName(spec.kind)),
                         " cannot be applied to microdata targets"));
      }
      if (std::get<RecordListSpec>(t).columns.empty()) {
        return absl::InvalidArgumentError("record list without columns");
      }
      continue;
    }
    const TableSpec& ts = std::get<TableSpec>(t);
    if (spec.kind == MechanismKind::kPerturbedTotal &&
        (ts.geo_level != GeoLevel::kNational || !ts.margin.empty())) {
      return absl::InvalidArgumentError(
          "PerturbedTotal only releases the national population count");
    }
  }
  return absl::OkStatus();
}

std::vector<ProductTarget> NormalizedTargets(
    const MechanismSpec& spec, std::span<const ProductTarget> targets) {
  if (spec.kind == MechanismKind::kPerturbedTotal && targets.empty()) {
    return {NationalTotalSpec()};
  }
  return {targets.begin(), targets.end()};
}

std::vector<int64_t> FlatCells(std::span<const Product> products) {
  std::vector<int64_t> cells;
  for (const Product& p : products) {
    const Table& t = std::get<Table>(p);
    for (const std::optional<int64_t>& c : t.cells()) cells.push_back(c.value_or(0));
  }
  return cells;
}

absl::StatusOr<std::vector<int64_t>> ObservedCells(const Release& release) {
  std::vector<int64_t> cells;
  for (const Product& p : release.products) {
    const Table* t = std::get_if<Table>(&p);
    if (t == nullptr) {
      return absl::InvalidArgumentError("noisy release carries records");
    }
    for (const std::optional<int64_t>& c : t->cells()) {
      if (!c) return absl::InvalidArgumentError("noisy release has a hole");
      cells.push_back(*c);
    }
  }
  return cells;
}

Rational ClassCellProbability(const Rational& alpha, CellClass kind,
                              int64_t value, int64_t truth) {
  switch (kind) {
    case CellClass::kPoint:
      return GeometricMass(alpha, value - truth);
    case CellClass::kAtOrBelow:
      return GeometricCdf(alpha, value - truth);
    case CellClass::kAtOrAbove: {
      Rational r = 1 - GeometricCdf(alpha, value - truth - 1);
      return r;
    }
    case CellClass::kAny:
      return 1;
  }
  return 0;
}

}  // namespace

std::string_view MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kIdentity:
      return "Identity";
    case MechanismKind::kGeometricNoise:
      return "GeometricNoise";
    case MechanismKind::kSwap:
      return "Swap";
    case MechanismKind::kSuppress:
      return "Suppress";
    case MechanismKind::kCoarsen:
      return "Coarsen";
    case MechanismKind::kPerturbedTotal:
      return "PerturbedTotal";
  }
  return "?";
}

absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name) {
  for (MechanismKind k :
       {MechanismKind::kIdentity, MechanismKind::kGeometricNoise,
        MechanismKind::kSwap, MechanismKind::kSuppress, MechanismKind::kCoarsen,
        MechanismKind::kPerturbedTotal}) {
    if (MechanismKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism kind '", std::string(name), "'"));
}

bool IsNoiseKind(MechanismKind kind) {
  return kind == MechanismKind::kGeometricNoise ||
         kind == MechanismKind::kPerturbedTotal;
}

absl::Status ValidateMechanism(const MechanismSpec& spec) {
  if (IsNoiseKind(spec.kind)) {
    if (!(spec.alpha > 0 && spec.alpha < 1)) {
      return absl::InvalidArgumentError("alpha must lie strictly in (0, 1)");
    }
    if (spec.sensitivity < 1) {
      return absl::InvalidArgumentError("sensitivity must be positive");
    }
  }
  if (spec.kind == MechanismKind::kSwap) {
    if (spec.swap_rate < 0 || spec.swap_rate > 1) {
      return absl::InvalidArgumentError("swap rate outside [0, 1]");
    }
    if (spec.swap_keys.empty()) {
      return absl::InvalidArgumentError("swap needs at least one key");
    }
    if (std::find(spec.swap_keys.begin(), spec.swap_keys.end(),
                  Attribute::kBlock) != spec.swap_keys.end()) {
      return absl::InvalidArgumentError("block cannot be a swap key");
    }
  }
  if (spec.kind == MechanismKind::kSuppress && spec.threshold < 0) {
    return absl::InvalidArgumentError("suppression threshold is negative");
  }
  if (spec.kind == MechanismKind::kCoarsen && !spec.coarse_bins) {
    return absl::InvalidArgumentError("Coarsen needs coarse_bins");
  }
  return absl::OkStatus();
}

Epsilon Epsilon::Nominal(Rational value) {
  Epsilon e;
  e.nominal_ = std::move(value);
  return e;
}

Epsilon Epsilon::LogOf(Rational argument) {
  Epsilon e;
  e.log_argument_ = std::move(argument);
  return e;
}

double Epsilon::value() const {
  return nominal_.get_d() + std::log(log_argument_.get_d());
}

std::optional<Rational> Epsilon::ExpBound() const {
  if (nominal_ != 0) return std::nullopt;
  return log_argument_;
}

Epsilon Epsilon::operator+(const Epsilon& other) const {
  Epsilon e;
  e.nominal_ = nominal_ + other.nominal_;
  e.log_argument_ = log_argument_ * other.log_argument_;
  return e;
}

const RecordList* Release::records() const {
  for (const Product& p : products) {
    if (const RecordList* r = std::get_if<RecordList>(&p)) return r;
  }
  return nullptr;
}

std::optional<Epsilon> EpsilonOf(const MechanismSpec& spec) {
  if (!IsNoiseKind(spec.kind)) return std::nullopt;
  return Epsilon::LogOf(Pow(1 / spec.alpha, spec.sensitivity));
}

std::vector<int> RecordRow(const Person& person,
                           std::span<const Attribute> columns,
                           const MechanismSpec& spec) {
  std::vector<int> row;
  row.reserve(columns.size());
  for (Attribute a : columns) {
    int v = GetAttribute(person, a);
    if (a == Attribute::kAge && spec.kind == MechanismKind::kCoarsen) {
      v = spec.coarse_bins->Representative(spec.coarse_bins->BinOfUnchecked(v));
    }
    row.push_back(v);
  }
  return row;
}

absl::StatusOr<std::vector<Product>> ProductsOf(
    const Dataset& protected_data, const MechanismSpec& spec,
    std::span<const ProductTarget> targets) {
  std::vector<Product> products;
  for (const ProductTarget& target : targets) {
    if (const RecordListSpec* rs = std::get_if<RecordListSpec>(&target)) {
      RecordList list;
      list.columns = rs->columns;
      for (const Person& p : protected_data.persons()) {
        list.rows.push_back(RecordRow(p, rs->columns, spec));
      }
      std::sort(list.rows.begin(), list.rows.end());
      products.push_back(std::move(list));
      continue;
    }
    TableSpec ts = std::get<TableSpec>(target);
    if (spec.kind == MechanismKind::kCoarsen) {
      if (spec.coarse_bins->max_age() != ts.age_bins.max_age()) {
        return absl::InvalidArgumentError("coarse bins do not span the ages");
      }
      ts.age_bins = *spec.coarse_bins;
    }
    absl::StatusOr<Table> table = Tabulate(protected_data, ts);
    if (!table.ok()) return table.status();
    if (spec.kind == MechanismKind::kSuppress) {
      SuppressTable(*table, spec.threshold, spec.complementary);
    }
    products.push_back(*std::move(table));
  }
  return products;
}

absl::StatusOr<std::optional<std::vector<Realization>>> Realizations(
    const Dataset& data, const MechanismSpec& spec, size_t cap) {
  if (IsNoiseKind(spec.kind)) {
    return absl::InvalidArgumentError(
        "noise mechanisms have no finite realization set");
  }
  std::vector<Realization> out;
  if (spec.kind != MechanismKind::kSwap) {
    out.push_back({Rational(1), data});
    return out;
  }
  const size_t n = data.size();
  if (n >= 40 || (size_t{1} << n) > cap) return std::nullopt;
  const Rational keep = 1 - spec.swap_rate;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    std::vector<bool> selected(n);
    int count = 0;
    for (size_t i = 0; i < n; ++i) {
      selected[i] = (mask >> i) & 1;
      count += selected[i];
    }
    Rational p = Pow(spec.swap_rate, count) * Pow(keep, n - count);
    if (p == 0) continue;
    out.push_back({std::move(p), SwapSelected(data, spec, selected)});
  }
  return out;
}

absl::StatusOr<Release> Apply(const Dataset& data, const MechanismSpec& spec,
                              std::span<const ProductTarget> targets,
                              std::string id) {
  if (absl::Status st = ValidateMechanism(spec); !st.ok()) return st;
  std::vector<ProductTarget> normalized = NormalizedTargets(spec, targets);
  if (absl::Status st = CheckTargets(spec, normalized); !st.ok()) return st;

  Release release;
  release.id = std::move(id);
  release.mechanism = spec;
  release.targets = normalized;
  release.epsilon = EpsilonOf(spec);

  if (spec.kind == MechanismKind::kSwap) {
    Rng rng(DeriveSeed(spec.seed, "mechanisms/swap"));
    std::vector<bool> selected(data.size());
    for (size_t i = 0; i < data.size(); ++i) {
      selected[i] = rng.Bernoulli(spec.swap_rate);
    }
    absl::StatusOr<std::vector<Product>> products =
        ProductsOf(SwapSelected(data, spec, selected), spec, normalized);
    if (!products.ok()) return products.status();
    release.products = *std::move(products);
    return release;
  }
  absl::StatusOr<std::vector<Product>> products =
      ProductsOf(data, spec, normalized);
  if (!products.ok()) return products.status();
  release.products = *std::move(products);
  if (IsNoiseKind(spec.kind)) {
    Rng rng(DeriveSeed(spec.seed, "mechanisms/geometric"));
    for (Product& p : release.products) {
      Table& t = std::get<Table>(p);
      for (size_t i = 0; i < t.size(); ++i) {
        *t.mutable_cell(i) = *t.cell(i) + rng.TwoSidedGeometric(spec.alpha);
      }
    }
  }
  return release;
}

Rational GeometricMass(const Rational& alpha, int64_t k) {
  Rational r = (1 - alpha) / (1 + alpha) * Pow(alpha, std::abs(k));
  return r;
}

Rational GeometricCdf(const Rational& alpha, int64_t k) {
  // P(noise <= -m) = a^m / (1 + a) for m >= 1.
  if (k < 0) {
    Rational r = Pow(alpha, -k) / (1 + alpha);
    return r;
  }
  Rational r = 1 - Pow(alpha, k + 1) / (1 + alpha);
  return r;
}

std::string ProductsKey(std::span<const Product> products) {
  std::string key;
  for (const Product& p : products) {
    if (const Table* t = std::get_if<Table>(&p)) {
      absl::StrAppend(&key, "T", t->spec().name, "|",
                      std::string(GeoLevelName(t->spec().geo_level)), "|",
                      t->spec().age_bins.size(), "|");
      for (int g : t->geos()) absl::StrAppend(&key, g, ",");
      absl::StrAppend(&key, "|");
      for (const std::optional<int64_t>& c : t->cells()) {
        if (c) {
          absl::StrAppend(&key, *c, ",");
        } else {
          absl::StrAppend(&key, "x,");
        }
      }
    } else {
      const RecordList& r = std::get<RecordList>(p);
      absl::StrAppend(&key, "R");
      for (Attribute a : r.columns) absl::StrAppend(&key, std::string(AttributeName(a)), ",");
      absl::StrAppend(&key, "|");
      for (const std::vector<int>& row : r.rows) {
        for (int v : row) absl::StrAppend(&key, v, ",");
        absl::StrAppend(&key, ";");
      }
    }
    absl::StrAppend(&key, "#");
  }
  return key;
}

absl::StatusOr<PreparedCandidate> PreparedCandidate::Create(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    const Dataset& data, size_t cap) {
  if (absl::Status st = ValidateMechanism(spec); !st.ok()) return st;
  std::vector<ProductTarget> normalized = NormalizedTargets(spec, targets);
  if (absl::Status st = CheckTargets(spec, normalized); !st.ok()) return st;
  PreparedCandidate prepared;
  prepared.spec_ = spec;
  if (IsNoiseKind(spec.kind)) {
    absl::StatusOr<std::vector<Product>> products =
        ProductsOf(data, spec, normalized);
    if (!products.ok()) return products.status();
    prepared.cells_ = FlatCells(*products);
    return prepared;
  }
  absl::StatusOr<std::optional<std::vector<Realization>>> realizations =
      Realizations(data, spec, cap);
  if (!realizations.ok()) return realizations.status();
  if (!realizations->has_value()) {
    prepared.available_ = false;
    return prepared;
  }
  std::map<std::string, Rational> by_key;
  for (const Realization& r : **realizations) {
    absl::StatusOr<std::vector<Product>> products =
        ProductsOf(r.data, spec, normalized);
    if (!products.ok()) return products.status();
    by_key[ProductsKey(*products)] += r.probability;
  }
  for (auto& [key, p] : by_key) prepared.outcomes_.push_back({key, p});
  return prepared;
}

absl::StatusOr<std::optional<Rational>> PreparedCandidate::Likelihood(
    const Release& release) const {
  if (!available_) return std::optional<Rational>();
  if (IsNoiseKind(spec_.kind)) {
    absl::StatusOr<std::vector<int64_t>> observed = ObservedCells(release);
    if (!observed.ok()) return observed.status();
    if (observed->size() != cells_.size()) {
      return absl::InvalidArgumentError(
          "release shape does not match the mechanism targets");
    }
    Rational l = 1;
    for (size_t i = 0; i < cells_.size(); ++i) {
      l *= GeometricMass(spec_.alpha, (*observed)[i] - cells_[i]);
    }
    return std::optional<Rational>(std::move(l));
  }
  const std::string key = ProductsKey(release.products);
  auto it = std::lower_bound(
      outcomes_.begin(), outcomes_.end(), key,
      [](const Outcome& o, const std::string& k) { return o.key < k; });
  if (it == outcomes_.end() || it->key != key) {
    return std::optional<Rational>(Rational(0));
  }
  return std::optional<Rational>(it->probability);
}

absl::StatusOr<Rational> PreparedCandidate::ClassProbability(
    const OutputClass& output_class) const {
  if (!IsNoiseKind(spec_.kind)) {
    absl::StatusOr<std::optional<Rational>> l = Likelihood(output_class.release);
    if (!l.ok()) return l.status();
    if (!l->has_value()) {
      return absl::ResourceExhaustedError("likelihood unavailable past cap");
    }
    return **l;
  }
  absl::StatusOr<std::vector<int64_t>> observed =
      ObservedCells(output_class.release);
  if (!observed.ok()) return observed.status();
  if (observed->size() != cells_.size() ||
      output_class.cells.size() != cells_.size()) {
    return absl::InvalidArgumentError("output class shape mismatch");
  }
  Rational p = 1;
  for (size_t i = 0; i < cells_.size(); ++i) {
    p *= ClassCellProbability(spec_.alpha, output_class.cells[i],
                              (*observed)[i], cells_[i]);
    if (p == 0) break;
  }
  return p;
}

absl::StatusOr<PreparedCandidate> PreparedCandidate::Shifted(
    std::span<const int64_t> delta) const {
  if (!IsNoiseKind(spec_.kind) || delta.size() != cells_.size()) {
    return absl::InvalidArgumentError("shift needs a matching noise candidate");
  }
  PreparedCandidate out = *this;
  for (size_t i = 0; i < delta.size(); ++i) out.cells_[i] += delta[i];
  return out;
}

absl::StatusOr<std::optional<Rational>> Likelihood(const Release& release,
                                                   const Dataset& candidate) {
  absl::StatusOr<PreparedCandidate> prepared =
      PreparedCandidate::Create(release.mechanism, release.targets, candidate);
  if (!prepared.ok()) return prepared.status();
  return prepared->Likelihood(release);
}

absl::StatusOr<std::vector<OutputClass>> EnumerateOutputClasses(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    std::span<const Dataset> candidates, size_t cap) {
  if (absl::Status st = ValidateMechanism(spec); !st.ok()) return st;
  std::vector<ProductTarget> normalized = NormalizedTargets(spec, targets);
  if (absl::Status st = CheckTargets(spec, normalized); !st.ok()) return st;
  if (candidates.empty()) {
    return absl::InvalidArgumentError("no candidate datasets");
  }
  Release base;
  base.mechanism = spec;
  base.targets = normalized;
  base.epsilon = EpsilonOf(spec);

  std::vector<OutputClass> classes;
  if (!IsNoiseKind(spec.kind)) {
    std::unordered_map<std::string, size_t> seen;
    for (const Dataset& d : candidates) {
      absl::StatusOr<std::optional<std::vector<Realization>>> realizations =
          Realizations(d, spec, cap);
      if (!realizations.ok()) return realizations.status();
      if (!realizations->has_value()) {
        return absl::ResourceExhaustedError(
            "mechanism configuration space exceeds the enumeration cap");
      }
      for (const Realization& r : **realizations) {
        absl::StatusOr<std::vector<Product>> products =
            ProductsOf(r.data, spec, normalized);
        if (!products.ok()) return products.status();
        std::string key = ProductsKey(*products);
        if (seen.contains(key)) continue;
        seen.emplace(std::move(key), classes.size());
        OutputClass c;
        c.release = base;
        c.release.products = *std::move(products);
        classes.push_back(std::move(c));
        if (classes.size() > cap) {
          return absl::ResourceExhaustedError("too many distinct outputs");
        }
      }
    }
    return classes;
  }

  std::vector<std::vector<int64_t>> truths;
  std::vector<Product> shape;
  for (const Dataset& d : candidates) {
    absl::StatusOr<std::vector<Product>> products =
        ProductsOf(d, spec, normalized);
    if (!products.ok()) return products.status();
    truths.push_back(FlatCells(*products));
    if (shape.empty()) shape = *std::move(products);
  }
  return EnumerateNoiseClasses(spec, normalized, shape, truths, cap);
}

absl::StatusOr<std::vector<OutputClass>> EnumerateNoiseClasses(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    const std::vector<Product>& shape,
    std::span<const std::vector<int64_t>> truths, size_t cap) {
  if (!IsNoiseKind(spec.kind)) {
    return absl::InvalidArgumentError("noise classes need a noise mechanism");
  }
  if (truths.empty()) return absl::InvalidArgumentError("no candidates");
  Release base;
  base.mechanism = spec;
  base.targets = NormalizedTargets(spec, targets);
  base.epsilon = EpsilonOf(spec);
  base.products = shape;
  // Per-cell ranges of the true counts over all candidates.
  std::vector<int64_t> lo = truths.front();
  std::vector<int64_t> hi = lo;
  if (lo.size() != FlatCells(shape).size()) {
    return absl::InvalidArgumentError("shape does not match the cells");
  }
  for (const std::vector<int64_t>& cells : truths) {
    if (cells.size() != lo.size()) {
      return absl::InvalidArgumentError(
          "candidates disagree on the release shape (geography mismatch)");
    }
    for (size_t i = 0; i < cells.size(); ++i) {
      lo[i] = std::min(lo[i], cells[i]);
      hi[i] = std::max(hi[i], cells[i]);
    }
  }
  std::vector<size_t> radix(lo.size());
  double total = 1;
  for (size_t i = 0; i < lo.size(); ++i) {
    radix[i] = lo[i] == hi[i] ? 1 : static_cast<size_t>(hi[i] - lo[i] + 3);
    total *= static_cast<double>(radix[i]);
  }
  if (total > static_cast<double>(cap)) {
    return absl::ResourceExhaustedError(
        "output class lattice exceeds the enumeration cap");
  }
  const size_t count = static_cast<size_t>(total);
  std::vector<OutputClass> classes;
  classes.reserve(count);
  std::vector<size_t> digit(lo.size(), 0);
  for (size_t n = 0; n < count; ++n) {
    OutputClass c;
    c.release = base;
    c.cells.resize(lo.size());
    size_t flat = 0;
    for (Product& p : c.release.products) {
      Table& t = std::get<Table>(p);
      for (size_t k = 0; k < t.size(); ++k, ++flat) {
        int64_t value;
        if (radix[flat] == 1) {
          c.cells[flat] = CellClass::kAny;
          value = lo[flat];
        } else {
          value = lo[flat] - 1 + static_cast<int64_t>(digit[flat]);
          c.cells[flat] = value < lo[flat]   ? CellClass::kAtOrBelow
                          : value > hi[flat] ? CellClass::kAtOrAbove
                                             : CellClass::kPoint;
        }
        *t.mutable_cell(k) = value;
      }
    }
    classes.push_back(std::move(c));
    for (size_t i = lo.size(); i-- > 0;) {
      if (++digit[i] < radix[i]) break;
      digit[i] = 0;
    }
  }
  return classes;
}

absl::StatusOr<Rational> ClassProbability(const OutputClass& output_class,
                                          const Dataset& data) {
  absl::StatusOr<PreparedCandidate> prepared = PreparedCandidate::Create(
      output_class.release.mechanism, output_class.release.targets, data);
  if (!prepared.ok()) return prepared.status();
  return prepared->ClassProbability(output_class);
}

absl::StatusOr<RatioCheck> DpRatioBoundCheck(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    const Dataset& d1, const Dataset& d2) {
  ReleasePlan plan{spec, {targets.begin(), targets.end()}};
  return ComposedRatioBoundCheck(std::span<const ReleasePlan>(&plan, 1), d1,
                                 d2);
}

std::optional<Rational> ComposedExpBound(std::span<const ReleasePlan> plans) {
  Rational bound = 1;
  for (const ReleasePlan& plan : plans) {
    if (std::optional<Epsilon> eps = EpsilonOf(plan.mechanism)) {
      std::optional<Rational> e = eps->ExpBound();
      if (!e) return std::nullopt;
      bound *= *e;
    }
  }
  return bound;
}

absl::StatusOr<std::vector<std::pair<Rational, Rational>>>
JointClassProbabilities(std::span<const ReleasePlan> plans, const Dataset& d1,
                        const Dataset& d2) {
  std::vector<std::vector<std::pair<Rational, Rational>>> per_plan;
  const Dataset pair[] = {d1, d2};
  double joint = 1;
  for (const ReleasePlan& plan : plans) {
    absl::StatusOr<std::vector<OutputClass>> classes =
        EnumerateOutputClasses(plan.mechanism, plan.targets, pair);
    if (!classes.ok()) return classes.status();
    absl::StatusOr<PreparedCandidate> c1 =
        PreparedCandidate::Create(plan.mechanism, plan.targets, d1);
    if (!c1.ok()) return c1.status();
    absl::StatusOr<PreparedCandidate> c2 =
        PreparedCandidate::Create(plan.mechanism, plan.targets, d2);
    if (!c2.ok()) return c2.status();
    std::vector<std::pair<Rational, Rational>> probs;
    for (const OutputClass& c : *classes) {
      absl::StatusOr<Rational> p1 = c1->ClassProbability(c);
      if (!p1.ok()) return p1.status();
      absl::StatusOr<Rational> p2 = c2->ClassProbability(c);
      if (!p2.ok()) return p2.status();
      probs.emplace_back(*std::move(p1), *std::move(p2));
    }
    joint *= static_cast<double>(probs.size());
    per_plan.push_back(std::move(probs));
  }
  if (joint > static_cast<double>(kEnumerationCap)) {
    return absl::ResourceExhaustedError("joint output space exceeds the cap");
  }
  // Joint outputs are the cartesian product of per-plan classes.
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(static_cast<size_t>(joint));
  std::vector<size_t> digit(per_plan.size(), 0);
  for (size_t n = 0; n < static_cast<size_t>(joint); ++n) {
    Rational p1 = 1;
    Rational p2 = 1;
    for (size_t k = 0; k < per_plan.size(); ++k) {
      p1 *= per_plan[k][digit[k]].first;
      p2 *= per_plan[k][digit[k]].second;
    }
    out.emplace_back(std::move(p1), std::move(p2));
    for (size_t k = per_plan.size(); k-- > 0;) {
      if (++digit[k] < per_plan[k].size()) break;
      digit[k] = 0;
    }
  }
  return out;
}

absl::StatusOr<RatioCheck> ComposedRatioBoundCheck(
    std::span<const ReleasePlan> plans, const Dataset& d1, const Dataset& d2) {
  RatioCheck check;
  std::optional<Rational> bound = ComposedExpBound(plans);
  if (!bound) {
    return absl::InvalidArgumentError("bound has no exact rational form");
  }
  check.bound = *bound;
  absl::StatusOr<std::vector<std::pair<Rational, Rational>>> probs =
      JointClassProbabilities(plans, d1, d2);
  if (!probs.ok()) return probs.status();
  bool unbounded = false;
  for (const auto& [p1, p2] : *probs) {
    if (p1 == 0) continue;
    if (p2 == 0) {
      unbounded = true;
      continue;
    }
    Rational r = p1 / p2;
    if (!check.worst || r > *check.worst) check.worst = std::move(r);
  }
  if (unbounded) check.worst.reset();
  check.within = !unbounded && check.worst.has_value() &&
                 *check.worst <= check.bound;
  return check;
}

absl::StatusOr<CompositionLedger> CompositionLedger::Compose(
    const Release& release) const {
  if (!release.epsilon) {
    return absl::FailedPreconditionError(absl::StrCat(
        "release '", release.id, "' from ",
        std::string(MechanismKindName(release.mechanism.kind)), " carries no epsilon"));
  }
  return Record(release.id, *release.epsilon);
}

CompositionLedger CompositionLedger::Record(std::string release_id,
                                            const Epsilon& eps) const {
  CompositionLedger next = *this;
  next.entries_.push_back({std::move(release_id), eps});
  next.total_ = next.total_ + eps;
  return next;
}

}  // namespace sdl
