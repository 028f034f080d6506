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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Every check compares the library against an
// oracle written here, independently of the code under test.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "sdl/critiques.h"
#include "sdl/mechanisms.h"
#include "sdl/posterior.h"
#include "sdl/rational.h"
#include "sdl/reconstruct.h"
#include "sdl/reident.h"
#include "sdl/risk.h"
#include "sdl/scenarios.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {
namespace {

// Collects the failures of one criterion.
class Checker {
 public:
  void Expect(bool condition, const std::string& what) {
    ++checks_;
    if (!condition && failures_.size() < 10) failures_.push_back(what);
    if (!condition) ++failed_;
  }
  template <typename T>
  bool Ok(const absl::StatusOr<T>& value, const std::string& what) {
    Expect(value.ok(), absl::StrCat(what, ": ", value.status().ToString()));
    return value.ok();
  }
  bool passed() const { return failed_ == 0; }
  const std::vector<std::string>& failures() const { return failures_; }
  int failed() const { return failed_; }
  int checks() const { return checks_; }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
  int checks_ = 0;
};

Person MakePerson(int64_t id, int block, int sex, int age, int race = 0,
                  int sensitive = 0) {
  Person p;
  p.id = id;
  p.block = block;
  p.sex = sex;
  p.age = age;
  p.race = race;
  p.sensitive = sensitive;
  return p;
}

Dataset MakeData(std::vector<Person> persons, Schema schema,
                 std::vector<int> blocks) {
  std::map<int, int> geo;
  for (int b : blocks) geo[b] = 0;
  for (const Person& p : persons) geo[p.block] = 0;
  return *Dataset::Create(std::move(schema), std::move(persons),
                          std::move(geo));
}

// Exhaustive maximum bipartite matching over subsets of the right side.
size_t BruteForceMatching(const std::vector<std::vector<bool>>& edge) {
  const size_t left = edge.size();
  const size_t right = left == 0 ? 0 : edge[0].size();
  std::vector<std::vector<int>> memo(left + 1,
                                     std::vector<int>(size_t{1} << right, -1));
  std::function<int(size_t, unsigned)> best = [&](size_t i,
                                                  unsigned used) -> int {
    if (i == left) return 0;
    int& slot = memo[i][used];
    if (slot >= 0) return slot;
    int result = best(i + 1, used);
    for (size_t j = 0; j < right; ++j) {
      if (edge[i][j] && !(used & (1u << j))) {
        result = std::max(result, 1 + best(i + 1, used | (1u << j)));
      }
    }
    return slot = result;
  };
  return static_cast<size_t>(best(0, 0));
}


void CriterionMatching(Checker& c) {
  const Schema schema = DeskSchema();
  // Letters A..D become ages 30..33 in one block.
  {
    std::vector<Person> attacker = {MakePerson(1, 0, 0, 30), MakePerson(2, 0, 0, 30),
                                    MakePerson(3, 0, 0, 31), MakePerson(4, 0, 0, 32)};
    Dataset conf = MakeData({MakePerson(11, 0, 0, 30), MakePerson(12, 0, 0, 31),
                             MakePerson(13, 0, 0, 33), MakePerson(14, 0, 0, 33)},
                            schema, {});
    KeySpec key;
    key.attributes = {Attribute::kBlock, Attribute::kSex, Attribute::kAge};
    auto m = MatchOneToOne(attacker, conf, key);
    if (c.Ok(m, "worked example")) {
      c.Expect(m->match_count == 2, "{A,A,B,C} vs {A,B,D,D} must give 2");
    }
  }
  std::mt19937_64 rng(20260101);
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  KeySpec exact;
  exact.attributes = {Attribute::kBlock, Attribute::kSex, Attribute::kAge};
  for (int inst = 0; inst < 500; ++inst) {
    std::vector<Person> attacker, conf;
    std::map<std::array<int, 3>, std::pair<int, int>> counts;
    const int na = draw(0, 30), nc = draw(0, 30);
    for (int i = 0; i < na; ++i) {
      Person p = MakePerson(i + 1, draw(0, 2), draw(0, 1), draw(40, 43));
      ++counts[{p.block, p.sex, p.age}].first;
      attacker.push_back(p);
    }
    for (int i = 0; i < nc; ++i) {
      Person p = MakePerson(1000 + i, draw(0, 2), draw(0, 1), draw(40, 43));
      ++counts[{p.block, p.sex, p.age}].second;
      conf.push_back(p);
    }
    size_t oracle = 0;
    for (const auto& [k, v] : counts) oracle += std::min(v.first, v.second);
    auto m = MatchOneToOne(attacker, MakeData(conf, schema, {0, 1, 2}), exact);
    if (!c.Ok(m, "exact instance")) continue;
    c.Expect(m->match_count == oracle,
             absl::StrCat("exact instance ", inst, ": ", m->match_count,
                          " vs sum-min ", oracle));
  }
  KeySpec fuzzy = exact;
  fuzzy.age_mode = AgeMode::kPlusMinusOne;
  for (int inst = 0; inst < 3000; ++inst) {
    const int na = draw(0, 10), nc = draw(0, 10);
    std::vector<Person> attacker, conf;
    for (int i = 0; i < na; ++i) {
      attacker.push_back(MakePerson(i + 1, 0, draw(0, 1), draw(30, 36)));
    }
    for (int i = 0; i < nc; ++i) {
      conf.push_back(MakePerson(100 + i, 0, draw(0, 1), draw(30, 36)));
    }
    std::vector<std::vector<bool>> edge(na, std::vector<bool>(nc));
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < nc; ++j) {
        edge[i][j] = attacker[i].sex == conf[j].sex &&
                     std::abs(attacker[i].age - conf[j].age) <= 1;
      }
    }
    const size_t oracle = BruteForceMatching(edge);
    auto m = MatchOneToOne(attacker, MakeData(conf, schema, {0}), fuzzy);
    if (!c.Ok(m, "fuzzy instance")) continue;
    c.Expect(m->match_count == oracle,
             absl::StrCat("fuzzy instance ", inst, ": ", m->match_count,
                          " vs brute force ", oracle));
    // The reported pairs must form a valid matching of that size.
    std::set<int64_t> used;
    bool valid = m->assignments.size() == oracle;
    for (const auto& [a, b] : m->assignments) {
      const Person& pa = attacker[a - 1];
      const Person& pb = conf[b - 100];
      valid = valid && used.insert(b).second && pa.sex == pb.sex &&
              std::abs(pa.age - pb.age) <= 1;
    }
    c.Expect(valid, absl::StrCat("fuzzy instance ", inst, ": invalid pairs"));
  }
}


void CriterionRvr(Checker& c) {
  // Ten blocks of 50. Blocks 0-5 each hold one 50-year-old woman; nobody
  // else shares that combination.
  std::vector<Person> persons;
  int64_t id = 1;
  for (int b = 0; b < 10; ++b) {
    for (int i = 0; i < 50; ++i) {
      if (b < 6 && i == 0) {
        persons.push_back(MakePerson(id++, b, 1, 50));
      } else {
        persons.push_back(MakePerson(id++, b, i % 2 == 0 ? 0 : 1,
                                     i % 2 == 0 ? 50 : 20 + i % 30));
      }
    }
  }
  Dataset data = MakeData(persons, DeskSchema(), {});
  size_t combo = 0;
  std::set<int> combo_blocks;
  for (const Person& p : data.persons()) {
    if (p.sex == 1 && p.age == 50) {
      ++combo;
      combo_blocks.insert(p.block);
    }
  }
  size_t covered = 0;
  for (const Person& p : data.persons()) covered += combo_blocks.count(p.block);
  const Rational share = MakeRational(combo, data.size());
  const Rational coverage = MakeRational(covered, data.size());
  c.Expect(share < MakeRational(2, 100), "combo must cover < 2% of persons");
  c.Expect(coverage >= MakeRational(60, 100),
           "combo blocks must hold >= 60% of the population");

  auto analytic = RvrAnalytic(data, 1, 50);
  if (!c.Ok(analytic, "rvr_analytic")) return;
  c.Expect(*analytic == coverage, "analytic rate is the covered share");
  GuessStrategy strategy;
  strategy.kind = GuessStrategy::Kind::kConstant;
  strategy.sex = 1;
  strategy.age = 50;
  const uint64_t trials = 100'000;
  auto sim = RvrSimulate(data, strategy, trials, 42);
  if (!c.Ok(sim, "rvr_simulate")) return;
  const double p = ToDouble(*analytic);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  c.Expect(std::abs(sim->rate - p) <= 4 * se,
           absl::StrCat("simulated ", sim->rate, " vs analytic ", p,
                        " exceeds 4 SE"));
  c.Expect(sim->rate >= 10 * ToDouble(share),
           "simulated rate must be >= 10x the population share");
  uint64_t hits = 0, misses = 0;
  for (const RvrBlockRow& row : sim->per_block) {
    hits += row.hits;
    misses += row.misses;
  }
  c.Expect(hits == sim->successes && hits + misses == trials,
           "per-block hits and misses must account for every trial");

  auto ex = RvrDegenerateExhibit(data, std::pair{1, 50});
  if (!c.Ok(ex, "degenerate exhibit")) return;
  c.Expect(ex->population_share == share, "exhibit share");
  c.Expect(ex->rvr_rate == *analytic, "exhibit rvr rate");
  c.Expect(ex->inflation >= 10, "inflation >= 10x");
  c.Expect(ex->one_to_one_rate <= share,
           "one-to-one rate must not exceed the population share");
  c.Expect(ex->one_to_one_matches == combo,
           "one-to-one matches equal the combo count");
}


void CriterionDpBounds(Checker& c) {
  Schema schema = DeskSchema();
  const std::vector<Person> universe = {
      MakePerson(1, 0, 0, 30, 0, 0), MakePerson(2, 0, 1, 40, 0, 1),
      MakePerson(3, 1, 0, 50, 0, 0), MakePerson(4, 1, 1, 60, 0, 1),
      MakePerson(5, 1, 0, 70, 0, 1)};
  auto subset = [&](unsigned mask) {
    std::vector<Person> kept;
    for (size_t i = 0; i < universe.size(); ++i) {
      if (mask & (1u << i)) kept.push_back(universe[i]);
    }
    return MakeData(kept, schema, {0, 1});
  };
  TableSpec by_sensitive{"block_sensitive", GeoLevel::kBlock,
                         {MarginAttribute::kSensitive}};
  TableSpec totals{"block_total", GeoLevel::kBlock, {}};
  const std::vector<ProductTarget> first = {by_sensitive};
  const std::vector<ProductTarget> second = {totals};

  for (const Rational& alpha :
       {MakeRational(1, 2), MakeRational(1, 3), MakeRational(9, 10)}) {
    MechanismSpec spec;
    spec.kind = MechanismKind::kGeometricNoise;
    spec.alpha = alpha;
    spec.sensitivity = 1;
    MechanismSpec other = spec;
    other.alpha = MakeRational(1, 2);
    const Rational bound = 1 / alpha;
    const Rational joint_bound = bound * 2;
    const std::string tag = FormatRational(alpha);
    const std::vector<ReleasePlan> one = {{spec, first}};
    const std::vector<ReleasePlan> both = {{spec, first}, {other, second}};
    for (unsigned mask = 0; mask < 32; ++mask) {
      for (size_t i = 0; i < universe.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        const Dataset d1 = subset(mask);
        const Dataset d2 = subset(mask & ~(1u << i));
        const std::string pair = absl::StrCat("alpha ", tag, " mask ", mask,
                                              " drop ", i + 1);
        for (int dir = 0; dir < 2; ++dir) {
          const Dataset& a = dir == 0 ? d1 : d2;
          const Dataset& b = dir == 0 ? d2 : d1;
          auto check = DpRatioBoundCheck(spec, first, a, b);
          if (c.Ok(check, pair)) {
            // One count moves by one, so the tail ratio is exactly 1/alpha.
            c.Expect(check->worst.has_value() && *check->worst == bound &&
                         check->worst <= bound && check->bound == bound &&
                         check->within,
                     absl::StrCat(pair, ": single-release bound"));
          }
          auto joint = ComposedRatioBoundCheck(both, a, b);
          if (c.Ok(joint, pair)) {
            c.Expect(joint->worst.has_value() &&
                         *joint->worst <= joint_bound &&
                         *joint->worst == joint_bound &&
                         joint->bound == joint_bound && joint->within,
                     absl::StrCat(pair, ": composition bound"));
          }
          auto curve = CounterfactualFreq(one, a, b);
          if (c.Ok(curve, pair)) {
            bool ok = curve->within_bound && !curve->points.empty() &&
                      curve->epsilon_bound == bound;
            for (const TradeoffPoint& pt : curve->points) {
              Rational cap = pt.alpha * bound;
              if (cap > 1) cap = 1;
              ok = ok && pt.power <= cap && pt.power >= 0 && pt.alpha >= 0 &&
                   pt.alpha <= 1;
            }
            c.Expect(ok, absl::StrCat(pair, ": tradeoff curve"));
          }
        }
      }
    }
  }
}


// Naive Bayes over explicitly enumerated worlds. Worlds are keyed by the
// option vector (-1 for absent).
struct Oracle {
  std::map<std::vector<int>, Rational> posterior;
};

void CriterionPosterior(Checker& c) {
  std::mt19937_64 rng(4242);
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int inst = 0; inst < 200; ++inst) {
    const std::string tag = absl::StrCat("world ", inst);
    Schema schema = DeskSchema();
    schema.sensitive_levels = draw(2, 3);
    const int levels = schema.sensitive_levels;
    AttackerModel attacker;
    attacker.name = "random";
    attacker.schema = schema;
    attacker.geography = {{0, 0}, {1, 0}};
    const int persons = draw(1, 4);
    for (int i = 0; i < persons; ++i) {
      CandidatePerson cand;
      cand.known = MakePerson(i + 1, draw(0, 1), draw(0, 1), 20 + i);
      cand.unknown = {Attribute::kSensitive};
      std::vector<int> weights(levels);
      int total = 0;
      for (int& w : weights) total += (w = draw(0, 3));
      if (total == 0) total += (weights[0] = 1);
      for (int v = 0; v < levels; ++v) {
        if (weights[v] > 0) {
          cand.prior.push_back({{v}, MakeRational(weights[v], total)});
        }
      }
      const int inc = draw(0, 2);
      cand.inclusion = inc == 0 ? MakeRational(1) : MakeRational(inc, 3);
      attacker.universe.push_back(cand);
    }
    // The truth: one option per present candidate.
    std::vector<Person> truth;
    for (const CandidatePerson& cand : attacker.universe) {
      if (cand.inclusion != 1 && draw(0, 2) == 0) continue;
      Person p = cand.known;
      p.sensitive =
          cand.prior[draw(0, static_cast<int>(cand.prior.size()) - 1)].values[0];
      truth.push_back(p);
    }
    Dataset truth_data =
        *Dataset::Create(schema, truth, attacker.geography);
    MechanismSpec spec;
    const int kind = draw(0, 2);
    spec.kind = kind == 0   ? MechanismKind::kIdentity
                : kind == 1 ? MechanismKind::kGeometricNoise
                            : MechanismKind::kSuppress;
    spec.alpha = draw(0, 1) == 0 ? MakeRational(1, 2) : MakeRational(1, 3);
    spec.threshold = 2;
    spec.seed = static_cast<uint64_t>(inst) * 7919;
    const TableSpec table{"block_sensitive", GeoLevel::kBlock,
                          {MarginAttribute::kSensitive}};
    const std::vector<ProductTarget> targets = {table};
    auto release = Apply(truth_data, spec, targets, "r");
    if (!c.Ok(release, tag)) continue;
    const Table& out = std::get<Table>(release->products[0]);

    // Loop 1: worlds. Loop 2: persons, to build cell counts. Loop 3: cells,
    // to score the release.
    Oracle oracle;
    Rational normalizer = 0;
    std::vector<int> choice(persons, 0);
    std::vector<int> radix(persons);
    for (int i = 0; i < persons; ++i) {
      radix[i] = static_cast<int>(attacker.universe[i].prior.size()) +
                 (attacker.universe[i].inclusion == 1 ? 0 : 1);
    }
    while (true) {
      Rational prior = 1;
      std::vector<int> option(persons);
      std::vector<int64_t> counts(2 * levels, 0);
      for (int i = 0; i < persons; ++i) {
        const CandidatePerson& cand = attacker.universe[i];
        const bool maybe_absent = cand.inclusion != 1;
        if (maybe_absent && choice[i] == 0) {
          option[i] = -1;
          prior *= 1 - cand.inclusion;
          continue;
        }
        const int o = choice[i] - (maybe_absent ? 1 : 0);
        option[i] = o;
        prior *= cand.inclusion * cand.prior[o].weight;
        ++counts[cand.known.block * levels + cand.prior[o].values[0]];
      }
      Rational like = 1;
      for (size_t cell = 0; cell < counts.size(); ++cell) {
        const std::optional<int64_t>& seen = out.cell(cell);
        const int64_t t = counts[cell];
        switch (spec.kind) {
          case MechanismKind::kIdentity:
            if (seen != t) like = 0;
            break;
          case MechanismKind::kSuppress: {
            const bool hidden = t > 0 && t < spec.threshold;
            if (hidden ? seen.has_value() : seen != t) like = 0;
            break;
          }
          default: {
            const Rational& a = spec.alpha;
            Rational mass = (1 - a) / (1 + a);
            for (int64_t k = std::llabs(*seen - t); k > 0; --k) mass *= a;
            like *= mass;
          }
        }
      }
      normalizer += prior * like;
      if (prior * like > 0) oracle.posterior[option] = prior * like;
      int i = persons - 1;
      while (i >= 0 && ++choice[i] == radix[i]) choice[i--] = 0;
      if (i < 0) break;
    }
    for (auto& [k, v] : oracle.posterior) v /= normalizer;

    const std::vector<Release> releases = {*release};
    auto post = EnumeratePosterior(attacker, releases);
    if (!c.Ok(post, tag)) continue;
    if (!post->has_value()) {
      c.Expect(false, tag + ": unavailable");
      continue;
    }
    const WorldPosterior& wp = **post;
    Rational sum = 0;
    bool same = wp.support.size() == oracle.posterior.size() &&
                wp.normalizer == normalizer;
    for (size_t w = 0; w < wp.support.size(); ++w) {
      sum += wp.probability[w];
      auto it = oracle.posterior.find(wp.support[w].option);
      same = same && it != oracle.posterior.end() &&
             it->second == wp.probability[w];
    }
    c.Expect(same, tag + ": posterior differs from naive Bayes");
    c.Expect(sum == 1, tag + ": posterior does not sum to 1");
    // Marginal of the first candidate taking its first prior value.
    const int v0 = attacker.universe[0].prior[0].values[0];
    Rational want = 0;
    for (const auto& [opt, pr] : oracle.posterior) {
      if (opt[0] >= 0 && attacker.universe[0].prior[opt[0]].values[0] == v0) {
        want += pr;
      }
    }
    auto marginal = Marginal(attacker, wp, 1, v0);
    if (c.Ok(marginal, tag)) {
      c.Expect(*marginal == want, tag + ": marginal differs");
    }
  }
}


std::vector<std::vector<int64_t>> BruteForceSolutions(
    const ConstraintSystem& sys) {
  std::vector<int64_t> bound(sys.num_variables, INT64_MAX);
  for (const Equation& eq : sys.equations) {
    for (int v : eq.vars) bound[v] = std::min(bound[v], eq.rhs);
  }
  std::vector<std::vector<int64_t>> found;
  std::vector<int64_t> x(sys.num_variables, 0);
  std::function<void(size_t)> walk = [&](size_t v) {
    if (v == sys.num_variables) {
      for (const Equation& eq : sys.equations) {
        int64_t s = 0;
        for (int u : eq.vars) s += x[u];
        if (s != eq.rhs) return;
      }
      found.push_back(x);
      return;
    }
    for (int64_t val = 0; val <= bound[v]; ++val) {
      x[v] = val;
      walk(v + 1);
    }
    x[v] = 0;
  };
  if (std::all_of(bound.begin(), bound.end(),
                  [](int64_t b) { return b >= 0; })) {
    walk(0);
  }
  return found;
}

void CriterionReconstruction(Checker& c) {
  std::mt19937_64 rng(777);
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const Schema desk = DeskSchema();
  for (int inst = 0; inst < 100; ++inst) {
    const std::string tag = absl::StrCat("round trip ", inst);
    std::vector<Person> persons;
    const int n = draw(1, 12);
    for (int i = 0; i < n; ++i) {
      persons.push_back(MakePerson(i + 1, draw(0, 2), draw(0, 1), draw(0, 90),
                                   draw(0, 2)));
      persons.back().ethnicity = draw(0, 1);
    }
    Dataset data = MakeData(persons, desk, {0, 1, 2});
    auto table = Tabulate(data, FullCrossTabSpec(desk));
    if (!c.Ok(table, tag)) continue;
    const std::vector<Table> tables = {*table};
    auto sys = BuildConstraints(tables, desk, data.geography());
    if (!c.Ok(sys, tag)) continue;
    auto res = SolveAll(*sys);
    if (!c.Ok(res, tag)) continue;
    std::vector<int64_t> histogram(sys->num_variables, 0);
    for (const Person& p : persons) {
      const size_t b = std::find(sys->blocks.begin(), sys->blocks.end(),
                                 p.block) - sys->blocks.begin();
      ++histogram[b * sys->cells_per_block + *CellOf(p, desk)];
    }
    c.Expect(res->unique() && res->solutions[0] == histogram,
             tag + ": not the unique true histogram");
    if (res->unique()) {
      auto rebuilt =
          MicrodataFromSolution(*sys, res->solutions[0], desk, data.geography());
      if (c.Ok(rebuilt, tag)) {
        auto again = Tabulate(*rebuilt, FullCrossTabSpec(desk));
        c.Expect(again.ok() && *again == *table,
                 tag + ": rebuilt microdata tabulate differently");
      }
    }
  }

  // A block with two cells and only its total published.
  Schema two = desk;
  two.age_bins = *AgeBinSystem::Create("all", {{0, kDefaultMaxAge}});
  two.race_levels = 1;
  two.ethnicity_levels = 1;
  for (int n = 0; n <= 12; ++n) {
    std::vector<Person> persons;
    for (int i = 0; i < n; ++i) persons.push_back(MakePerson(i + 1, 0, i % 2, 30));
    Dataset data = MakeData(persons, two, {0});
    TableSpec total{"total", GeoLevel::kBlock, {}, two.age_bins};
    auto table = Tabulate(data, total);
    if (!c.Ok(table, "total only")) continue;
    const std::vector<Table> tables = {*table};
    auto sys = BuildConstraints(tables, two, data.geography());
    if (!c.Ok(sys, "total only")) continue;
    auto res = SolveAll(*sys);
    if (!c.Ok(res, "total only")) continue;
    c.Expect(!res->capped && res->solution_count == static_cast<uint64_t>(n + 1),
             absl::StrCat("total-only block of ", n, " gave ",
                          res->solution_count));
  }

  // Hand-built systems against brute force.
  int compared = 0;
  while (compared < 400) {
    ConstraintSystem sys;
    sys.num_variables = draw(1, 12);
    std::vector<int64_t> hidden(sys.num_variables);
    for (auto& h : hidden) h = draw(0, 2);
    const int eqs = draw(1, 6);
    std::vector<bool> covered(sys.num_variables, false);
    auto add = [&](std::vector<int> vars) {
      Equation eq;
      eq.vars = std::move(vars);
      for (int v : eq.vars) {
        eq.rhs += hidden[v];
        covered[v] = true;
      }
      if (draw(0, 9) == 0) eq.rhs += draw(-1, 1);  // sometimes infeasible
      eq.rhs = std::max<int64_t>(eq.rhs, 0);
      eq.label = absl::StrCat("e", sys.equations.size());
      sys.equations.push_back(std::move(eq));
    };
    for (int e = 0; e < eqs; ++e) {
      std::vector<int> vars;
      for (size_t v = 0; v < sys.num_variables; ++v) {
        if (draw(0, 2) == 0) vars.push_back(static_cast<int>(v));
      }
      if (!vars.empty()) add(vars);
    }
    for (size_t v = 0; v < sys.num_variables; ++v) {
      if (!covered[v]) add({static_cast<int>(v)});
    }
    double space = 1;
    std::vector<int64_t> bound(sys.num_variables, INT64_MAX);
    for (const Equation& eq : sys.equations) {
      for (int v : eq.vars) bound[v] = std::min(bound[v], eq.rhs);
    }
    for (int64_t b : bound) space *= static_cast<double>(b + 1);
    if (space > 2e5) continue;
    ++compared;
    auto res = SolveAll(sys, 10'000'000);
    if (!c.Ok(res, "brute force system")) continue;
    auto want = BruteForceSolutions(sys);
    auto got = res->solutions;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    c.Expect(!res->capped && got == want &&
                 res->solution_count == want.size(),
             absl::StrCat("system ", compared, ": ", got.size(), " vs ",
                          want.size(), " solutions"));
  }

  // Nested families: each step adds one table.
  Schema small = desk;
  small.race_levels = 1;
  small.ethnicity_levels = 1;
  const std::vector<TableSpec> specs = {
      {"total", GeoLevel::kBlock, {}},
      {"sex", GeoLevel::kBlock, {MarginAttribute::kSex}},
      {"age", GeoLevel::kBlock, {MarginAttribute::kAgeBin}},
      {"sex_age", GeoLevel::kBlock,
       {MarginAttribute::kSex, MarginAttribute::kAgeBin}}};
  for (int inst = 0; inst < 30; ++inst) {
    std::vector<Person> persons;
    const int n = draw(0, 4);
    for (int i = 0; i < n; ++i) {
      persons.push_back(MakePerson(i + 1, 0, draw(0, 1), draw(0, 90)));
    }
    Dataset data = MakeData(persons, small, {0});
    std::vector<size_t> order = {0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Table> family;
    uint64_t previous = UINT64_MAX;
    for (size_t k : order) {
      auto t = Tabulate(data, specs[k]);
      if (!c.Ok(t, "nested")) break;
      family.push_back(*t);
      auto sys = BuildConstraints(family, small, data.geography());
      if (!c.Ok(sys, "nested")) break;
      auto res = SolveAll(*sys, 1'000'000);
      if (!c.Ok(res, "nested")) break;
      c.Expect(!res->capped && res->solution_count >= 1 &&
                   res->solution_count <= previous,
               absl::StrCat("nested family ", inst, ": count rose to ",
                            res->solution_count));
      previous = res->solution_count;
    }
  }
}


void CriterionVerdicts(Checker& c) {
  using V = Verdict;
  const V y = V::kPass, n = V::kFail, na = V::kNotApplicable,
          q = V::kUnassessed;
  const std::map<std::string, std::array<Verdict, kColumns>> want = {
      {"uninformative", {na, n, y, y}},
      {"reconstruction", {n, y, y, y}},
      {"generalizable", {n, n, y, y}},
      {"composition", {q, q, q, y}},
      {"multiple_attackers", {n, n, y, y}},
      {"brittleness", {y, y, y, y}},
  };
  auto first = RunAll(42);
  if (!c.Ok(first, "run-all")) return;
  c.Expect(first->size() == want.size(), "six scenario rows");
  std::set<std::string> seen;
  for (const ScenarioVerdict& v : *first) {
    seen.insert(v.scenario);
    auto it = want.find(v.scenario);
    if (it == want.end()) {
      c.Expect(false, "unexpected scenario " + v.scenario);
      continue;
    }
    c.Expect(v.verdicts == it->second,
             v.scenario + ": verdicts differ from the table");
    c.Expect(v.failed_checks.empty(), v.scenario + ": control check failed");
  }
  c.Expect(seen.size() == want.size(), "every row present");
  c.Expect(AllMatch(*first), "AllMatch");
  auto second = RunAll(42);
  if (!c.Ok(second, "second run")) return;
  c.Expect(RenderTable(*first) == RenderTable(*second),
           "run-all must be deterministic at seed 42");
}


void CriterionMetrics(Checker& c) {
  auto zero = ArcPctChange(0, 0);
  c.Expect(zero.ok() && !zero->has_value(), "arc(0,0) is no change");
  auto top = ArcPctChange(0, 5);
  c.Expect(top.ok() && top->has_value() && **top == 200, "arc(0,5) is 200");
  std::mt19937_64 rng(99);
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  for (int i = 0; i < 10'000; ++i) {
    const int64_t a = draw(0, 3) == 0 ? 0 : draw(0, 1000);
    const int64_t b = draw(0, 3) == 0 ? 0 : draw(0, 1000);
    auto ab = ArcPctChange(a, b);
    auto ba = ArcPctChange(b, a);
    if (!ab.ok() || !ba.ok()) {
      c.Expect(false, "arc errored");
      continue;
    }
    if (a == 0 && b == 0) {
      c.Expect(!ab->has_value() && !ba->has_value(), "both zero");
      continue;
    }
    c.Expect(ab->has_value() && ba->has_value() && **ab == -**ba,
             absl::StrCat("antisymmetry at ", a, ",", b));
    if (ab->has_value()) {
      c.Expect(**ab <= 200 && **ab >= -200, "bounded by 200");
      c.Expect(**ab == Rational(200 * (b - a)) / Rational(a + b),
               "arc formula");
    }
    auto naive = NaivePctChange(a, b);
    c.Expect(naive.ok() && naive->has_value() == (a != 0),
             absl::StrCat("naive defined iff base nonzero at ", a));
    if (naive.ok() && naive->has_value()) {
      c.Expect(**naive == Rational(100 * (b - a)) / Rational(a),
               "naive formula");
    }
  }
  // Direct scan over two sparse worlds, one of them with suppression.
  PopulationSpec spec;
  for (int b = 0; b < 10; ++b) spec.blocks.push_back({b, 0, 5});
  spec.seed = 1;
  auto da = Generate(spec);
  spec.seed = 2;
  auto db = Generate(spec);
  if (!c.Ok(da, "generate") || !c.Ok(db, "generate")) return;
  const TableSpec full = FullCrossTabSpec(DeskSchema());
  const TableSpec sex{"sex", GeoLevel::kBlock, {MarginAttribute::kSex}};
  std::vector<Table> ta = {*Tabulate(*da, full), *Tabulate(*da, sex)};
  MechanismSpec suppress;
  suppress.kind = MechanismKind::kSuppress;
  suppress.threshold = 2;
  const std::vector<ProductTarget> targets = {full, sex};
  auto rel = Apply(*db, suppress, targets);
  if (!c.Ok(rel, "suppress")) return;
  std::vector<Table> tb;
  for (const Product& pr : rel->products) tb.push_back(std::get<Table>(pr));
  size_t zeros = 0, cells = 0;
  for (size_t t = 0; t < ta.size(); ++t) {
    for (size_t i = 0; i < ta[t].size(); ++i) {
      ++cells;
      zeros += ta[t].cell(i) == 0 && tb[t].cell(i) == 0;
    }
  }
  auto frac = BothZeroFraction(ta, tb);
  c.Expect(frac.ok() && *frac == MakeRational(zeros, cells),
           "both-zero fraction must match the scan");
  auto self = BothZeroFraction(ta, ta);
  size_t self_zeros = 0;
  for (const Table& t : ta) {
    for (size_t i = 0; i < t.size(); ++i) self_zeros += t.cell(i) == 0;
  }
  c.Expect(self.ok() && *self == MakeRational(self_zeros, cells),
           "self both-zero fraction");
}


void CriterionLoo(Checker& c) {
  const Schema schema = DeskSchema();
  Dataset homogeneous = MakeData(
      {MakePerson(1, 0, 0, 30, 1), MakePerson(2, 0, 1, 31, 1),
       MakePerson(3, 0, 0, 32, 1), MakePerson(4, 0, 1, 33, 1),
       MakePerson(5, 0, 0, 34, 1)},
      schema, {});
  Dataset mixed =
      MakeData({MakePerson(1, 0, 0, 30, 0), MakePerson(2, 0, 1, 31, 1)},
               schema, {});
  Dataset singleton = MakeData({MakePerson(1, 0, 0, 30, 2)}, schema, {});
  const LooReport h = LooGap(homogeneous);
  const LooReport m = LooGap(mixed);
  const LooReport s = LooGap(singleton);
  c.Expect(h.all.gap == 0 && h.all.in_sample == 1 && h.all.loo == 1,
           "homogeneous block gap 0");
  c.Expect(m.all.gap > 0 && m.all.gap == MakeRational(1, 2) &&
               m.all.in_sample == MakeRational(1, 2) && m.all.loo == 0,
           "{X,Y} block gap positive");
  c.Expect(s.all.gap == 1, "singleton block gap 1");
  Dataset five = MakeData(
      {MakePerson(1, 0, 0, 30, 0), MakePerson(2, 0, 1, 31, 0),
       MakePerson(3, 0, 0, 32, 0), MakePerson(4, 0, 1, 33, 1),
       MakePerson(5, 0, 0, 34, 2)},
      schema, {});
  const ModalReport modal = ModalBaseline(five, 5);
  c.Expect(modal.nonmodal_predicted == 2 && modal.nonmodal_precision == 0,
           "nonmodal precision is exactly 0");
  c.Expect(modal.accuracy == MakeRational(3, 5), "modal accuracy 3/5");
}

struct Criterion {
  int number;
  const char* title;
  double limit_seconds;  // 0: no runtime limit
  std::function<void(Checker&)> run;
};

}  // namespace
}  // namespace sdl

int main() {
  using sdl::Checker;
  const std::vector<sdl::Criterion> criteria = {
      {1, "one-to-one matching semantics", 10, sdl::CriterionMatching},
      {2, "RVR degenerate guesser exhibit", 30, sdl::CriterionRvr},
      {3, "exact geometric DP bounds", 60, sdl::CriterionDpBounds},
      {4, "posterior engine vs naive Bayes", 0, sdl::CriterionPosterior},
      {5, "reconstruction solution sets", 60, sdl::CriterionReconstruction},
      {6, "desiderata verdicts at seed 42", 60, sdl::CriterionVerdicts},
      {7, "arc, naive and both-zero metrics", 0, sdl::CriterionMetrics},
      {8, "leave-one-out gap suite", 0, sdl::CriterionLoo},
  };
  int failed = 0;
  for (const sdl::Criterion& crit : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    crit.run(checker);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (crit.limit_seconds > 0 && seconds >= crit.limit_seconds) {
      checker.Expect(false, absl::StrCat("took ", seconds, " s, limit ",
                                         crit.limit_seconds, " s"));
    }
    const bool ok = checker.passed();
    failed += ok ? 0 : 1;
    std::printf("criterion %d: %s  %s (%d checks, %.2f s)\n", crit.number,
                ok ? "PASS" : "FAIL", crit.title, checker.checks(), seconds);
    for (const std::string& f : checker.failures()) {
      std::printf("    %s\n", f.c_str());
    }
    if (checker.failed() > static_cast<int>(checker.failures().size())) {
      std::printf("    ... %d failures in total\n", checker.failed());
    }
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
