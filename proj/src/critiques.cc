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

#include "sdl/critiques.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "sdl/seeding.h"

namespace sdl {
namespace {

struct BlockView {
  int block;
  std::vector<size_t> members;  // indices into data.persons()
};

std::vector<BlockView> BlocksOf(const Dataset& data) {
  std::map<int, std::vector<size_t>> by_block;
  for (size_t i = 0; i < data.persons().size(); ++i) {
    by_block[data.persons()[i].block].push_back(i);
  }
  std::vector<BlockView> out;
  for (auto& [block, members] : by_block) {
    out.push_back({block, std::move(members)});
  }
  return out;
}

// Most common value among `values`, lowest on ties; nullopt when empty.
std::optional<int> Mode(const std::map<int, size_t>& counts) {
  std::optional<int> best;
  size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

Rational Ratio(size_t num, size_t den) {
  if (den == 0) return Rational(0);
  Rational r(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

}  // namespace

absl::StatusOr<RvrOutcome> RvrSimulate(const Dataset& data,
                                       const GuessStrategy& strategy,
                                       uint64_t trials, uint64_t seed) {
  if (data.empty()) return absl::InvalidArgumentError("empty population");
  if (trials == 0) return absl::InvalidArgumentError("trials must be positive");
  const int max_age = data.schema().max_age();
  const int sexes = data.schema().sex_levels;
  if (strategy.kind == GuessStrategy::Kind::kConstant &&
      (strategy.sex < 0 || strategy.sex >= sexes || strategy.age < 0 ||
       strategy.age > max_age)) {
    return absl::OutOfRangeError("constant guess outside the schema");
  }
  const std::vector<BlockView> blocks = BlocksOf(data);
  std::vector<double> weights;
  std::vector<std::set<std::pair<int, int>>> present(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b) {
    weights.push_back(static_cast<double>(blocks[b].members.size()));
    for (size_t i : blocks[b].members) {
      const Person& p = data.persons()[i];
      present[b].insert({p.sex, p.age});
    }
  }
  // National (sex, age) frequencies for the proportional strategy.
  std::vector<std::pair<int, int>> combos;
  std::vector<double> combo_weights;
  {
    std::map<std::pair<int, int>, size_t> counts;
    for (const Person& p : data.persons()) ++counts[{p.sex, p.age}];
    for (const auto& [c, n] : counts) {
      combos.push_back(c);
      combo_weights.push_back(static_cast<double>(n));
    }
  }

  RvrOutcome out;
  out.trials = trials;
  for (const BlockView& b : blocks) {
    out.per_block.push_back(
        {b.block, static_cast<int64_t>(b.members.size()), 0, 0});
  }
  const uint64_t base = DeriveSeed(seed, "critiques/rvr");
  for (uint64_t t = 0; t < trials; ++t) {
    Rng rng(SplitMix64(base + t));
    const size_t b = rng.Categorical(weights);
    std::pair<int, int> guess;
    switch (strategy.kind) {
      case GuessStrategy::Kind::kConstant:
        guess = {strategy.sex, strategy.age};
        break;
      case GuessStrategy::Kind::kProportionalToPopulation:
        guess = combos[rng.Categorical(combo_weights)];
        break;
      case GuessStrategy::Kind::kUniformOverCombos: {
        const uint64_t k =
            rng.Below(static_cast<uint64_t>(sexes) * (max_age + 1));
        guess = {static_cast<int>(k / (max_age + 1)),
                 static_cast<int>(k % (max_age + 1))};
        break;
      }
    }
    if (present[b].contains(guess)) {
      ++out.successes;
      ++out.per_block[b].hits;
    } else {
      ++out.per_block[b].misses;
    }
  }
  out.rate = static_cast<double>(out.successes) / static_cast<double>(trials);
  return out;
}

absl::StatusOr<Rational> RvrAnalytic(const Dataset& data, int sex, int age) {
  if (data.empty()) return absl::InvalidArgumentError("empty population");
  size_t covered = 0;
  for (const BlockView& b : BlocksOf(data)) {
    for (size_t i : b.members) {
      const Person& p = data.persons()[i];
      if (p.sex == sex && p.age == age) {
        covered += b.members.size();
        break;
      }
    }
  }
  return Ratio(covered, data.size());
}

absl::StatusOr<DegenerateExhibit> RvrDegenerateExhibit(
    const Dataset& data, std::optional<std::pair<int, int>> combo) {
  if (data.empty()) return absl::InvalidArgumentError("empty population");
  DegenerateExhibit ex;
  if (combo) {
    ex.sex = combo->first;
    ex.age = combo->second;
    absl::StatusOr<Rational> r = RvrAnalytic(data, ex.sex, ex.age);
    if (!r.ok()) return r.status();
    ex.rvr_rate = *r;
  } else {
    // Population covered by blocks containing each combination.
    std::map<std::pair<int, int>, size_t> covered;
    for (const BlockView& b : BlocksOf(data)) {
      std::set<std::pair<int, int>> seen;
      for (size_t i : b.members) {
        const Person& p = data.persons()[i];
        if (seen.insert({p.sex, p.age}).second) {
          covered[{p.sex, p.age}] += b.members.size();
        }
      }
    }
    size_t best = 0;
    for (const auto& [c, n] : covered) {
      if (n > best) {
        best = n;
        ex.sex = c.first;
        ex.age = c.second;
      }
    }
    ex.rvr_rate = Ratio(best, data.size());
  }
  size_t count = 0;
  for (const Person& p : data.persons()) {
    if (p.sex == ex.sex && p.age == ex.age) ++count;
  }
  ex.population_share = Ratio(count, data.size());
  ex.inflation = count == 0 ? Rational(0) : Rational(ex.rvr_rate / ex.population_share);

  std::vector<Person> guesses;
  for (const Person& p : data.persons()) {
    Person g;
    g.id = p.id;
    g.block = p.block;
    g.sex = ex.sex;
    g.age = ex.age;
    guesses.push_back(g);
  }
  KeySpec key;
  key.attributes = {Attribute::kBlock, Attribute::kSex, Attribute::kAge};
  absl::StatusOr<MatchResult> match = MatchOneToOne(guesses, data, key);
  if (!match.ok()) return match.status();
  ex.one_to_one_matches = match->match_count;
  ex.one_to_one_rate = Ratio(match->match_count, guesses.size());
  return ex;
}

absl::StatusOr<std::optional<Rational>> ArcPctChange(int64_t a, int64_t b) {
  if (a < 0 || b < 0) {
    return absl::InvalidArgumentError("percentage changes take counts");
  }
  if (a == 0 && b == 0) return std::optional<Rational>();
  Rational r(200 * (b - a), a + b);
  r.canonicalize();
  return std::optional<Rational>(std::move(r));
}

absl::StatusOr<std::optional<Rational>> NaivePctChange(int64_t a, int64_t b) {
  if (a < 0 || b < 0) {
    return absl::InvalidArgumentError("percentage changes take counts");
  }
  if (a == 0) return std::optional<Rational>();
  Rational r(100 * (b - a), a);
  r.canonicalize();
  return std::optional<Rational>(std::move(r));
}

absl::StatusOr<Rational> BothZeroFraction(std::span<const Table> a,
                                          std::span<const Table> b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError("table lists differ in length");
  }
  size_t cells = 0;
  size_t zero = 0;
  for (size_t t = 0; t < a.size(); ++t) {
    const TableSpec& sa = a[t].spec();
    const TableSpec& sb = b[t].spec();
    if (sa.geo_level != sb.geo_level || sa.margin != sb.margin ||
        !(sa.age_bins == sb.age_bins) ||
        !std::equal(a[t].geos().begin(), a[t].geos().end(),
                    b[t].geos().begin(), b[t].geos().end()) ||
        a[t].size() != b[t].size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("tables '", sa.name, "' and '", sb.name,
                       "' are not aligned"));
    }
    for (size_t i = 0; i < a[t].size(); ++i) {
      ++cells;
      if (a[t].cell(i) == 0 && b[t].cell(i) == 0) ++zero;
    }
  }
  if (cells == 0) return absl::InvalidArgumentError("no cells to compare");
  return Ratio(zero, cells);
}

int RaceEthnicityOf(const Person& p, const Schema& schema) {
  return p.race * schema.ethnicity_levels + p.ethnicity;
}

ModalReport ModalBaseline(const Dataset& data, size_t min_block) {
  ModalReport report;
  report.predictions.assign(data.size(), std::nullopt);
  std::vector<GroupAccuracy> by_size(kGroupBins);
  std::vector<GroupAccuracy> by_homogeneity(kGroupBins);
  for (int b = 0; b < kGroupBins; ++b) {
    by_size[b].label = std::string(GroupLabel(Grouping::kBlockSize, b));
    by_homogeneity[b].label =
        std::string(GroupLabel(Grouping::kHomogeneity, b));
  }
  size_t nonmodal_correct = 0;
  for (const BlockView& b : BlocksOf(data)) {
    std::map<int, size_t> counts;
    for (size_t i : b.members) {
      ++counts[RaceEthnicityOf(data.persons()[i], data.schema())];
    }
    const int mode = *Mode(counts);
    const size_t n = b.members.size();
    GroupAccuracy& gs = by_size[BlockSizeBin(n)];
    GroupAccuracy& gh = by_homogeneity[HomogeneityBin(counts.at(mode), n)];
    gs.persons += n;
    gh.persons += n;
    if (n < min_block) continue;
    for (size_t i : b.members) {
      const int truth = RaceEthnicityOf(data.persons()[i], data.schema());
      report.predictions[i] = mode;
      ++report.predicted;
      ++gs.predicted;
      ++gh.predicted;
      if (truth == mode) {
        ++report.correct;
        ++gs.correct;
        ++gh.correct;
      } else {
        ++report.nonmodal_predicted;
      }
    }
  }
  report.accuracy = Ratio(report.correct, report.predicted);
  report.nonmodal_precision =
      Ratio(nonmodal_correct, report.nonmodal_predicted);
  for (GroupAccuracy& g : by_size) {
    if (g.persons > 0) report.by_block_size.push_back(std::move(g));
  }
  for (GroupAccuracy& g : by_homogeneity) {
    if (g.persons > 0) report.by_homogeneity.push_back(std::move(g));
  }
  return report;
}

LooReport LooGap(const Dataset& data, size_t min_block) {
  struct Tally {
    size_t persons = 0;
    size_t in_sample = 0;
    size_t loo = 0;
  };
  Tally all, modal, nonmodal;
  for (const BlockView& b : BlocksOf(data)) {
    if (b.members.size() < min_block) continue;
    std::map<int, size_t> counts;
    for (size_t i : b.members) {
      ++counts[RaceEthnicityOf(data.persons()[i], data.schema())];
    }
    const int mode = *Mode(counts);
    for (size_t i : b.members) {
      const int truth = RaceEthnicityOf(data.persons()[i], data.schema());
      std::map<int, size_t> left_out = counts;
      if (--left_out[truth] == 0) left_out.erase(truth);
      const std::optional<int> loo_mode = Mode(left_out);
      Tally& group = truth == mode ? modal : nonmodal;
      for (Tally* t : {&all, &group}) {
        ++t->persons;
        if (truth == mode) ++t->in_sample;
        if (loo_mode && *loo_mode == truth) ++t->loo;
      }
    }
  }
  auto finish = [](const Tally& t) {
    SubgroupGap g;
    g.persons = t.persons;
    g.in_sample = Ratio(t.in_sample, t.persons);
    g.loo = Ratio(t.loo, t.persons);
    g.gap = g.in_sample - g.loo;
    return g;
  };
  return {finish(all), finish(modal), finish(nonmodal)};
}

}  // namespace sdl
