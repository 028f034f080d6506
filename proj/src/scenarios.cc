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

#include "sdl/scenarios.h"

#include <algorithm>
#include <map>
#include <span>
#include <utility>

#include "absl/strings/str_cat.h"
#include "sdl/mechanisms.h"
#include "sdl/posterior.h"
#include "sdl/reconstruct.h"
#include "sdl/risk.h"
#include "sdl/seeding.h"
#include "sdl/status_macros.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {
namespace {

constexpr Verdict y = Verdict::kPass;
constexpr Verdict n = Verdict::kFail;
constexpr Verdict na = Verdict::kNotApplicable;
constexpr Verdict open = Verdict::kUnassessed;

Rational R(long p, long q = 1) { return MakeRational(p, q); }

Person MakePerson(int64_t id, int block, int sex, int age, int race,
                  int ethnicity, int sensitive) {
  Person p;
  p.id = id;
  p.block = block;
  p.sex = sex;
  p.age = age;
  p.race = race;
  p.ethnicity = ethnicity;
  p.sensitive = sensitive;
  return p;
}

CandidatePerson Known(const Person& p) {
  CandidatePerson c;
  c.known = p;
  return c;
}

// The attacker knows everything but one attribute, which follows `weights`
// over its levels.
CandidatePerson Unknown(const Person& p, Attribute attribute,
                        const std::vector<Rational>& weights,
                        Rational inclusion = 1) {
  CandidatePerson c;
  c.known = p;
  SetAttribute(c.known, attribute, 0);
  c.unknown = {attribute};
  for (size_t v = 0; v < weights.size(); ++v) {
    c.prior.push_back({{static_cast<int>(v)}, weights[v]});
  }
  c.inclusion = std::move(inclusion);
  return c;
}

CandidatePerson UnknownSensitive(const Person& p,
                                 const std::vector<Rational>& weights) {
  return Unknown(p, Attribute::kSensitive, weights);
}

std::vector<Rational> Uniform(int levels) {
  return std::vector<Rational>(levels, R(1, levels));
}

AttackerModel MakeAttacker(std::string name, const Dataset& data,
                           std::vector<CandidatePerson> universe) {
  AttackerModel a;
  a.name = std::move(name);
  a.schema = data.schema();
  a.geography = data.geography();
  a.universe = std::move(universe);
  return a;
}

TableSpec BlockTable(std::string name, std::vector<MarginAttribute> margin,
                     GeoLevel level = GeoLevel::kBlock) {
  TableSpec t;
  t.name = std::move(name);
  t.geo_level = level;
  t.margin = std::move(margin);
  return t;
}

RecordListSpec Records(std::vector<Attribute> columns) {
  RecordListSpec r;
  r.columns = std::move(columns);
  return r;
}

MechanismSpec Identity() { return {}; }

MechanismSpec Geometric(Rational alpha, int sensitivity, uint64_t seed) {
  MechanismSpec m;
  m.kind = MechanismKind::kGeometricNoise;
  m.alpha = std::move(alpha);
  m.sensitivity = sensitivity;
  m.seed = seed;
  return m;
}

MechanismSpec Perturbed(Rational alpha, uint64_t seed) {
  MechanismSpec m = Geometric(std::move(alpha), 1, seed);
  m.kind = MechanismKind::kPerturbedTotal;
  return m;
}

MechanismSpec Suppress(int threshold) {
  MechanismSpec m;
  m.kind = MechanismKind::kSuppress;
  m.threshold = threshold;
  return m;
}

absl::StatusOr<std::vector<Release>> ApplyAll(
    const Dataset& data, std::span<const ReleasePlan> plans) {
  std::vector<Release> out;
  for (size_t k = 0; k < plans.size(); ++k) {
    SDL_ASSIGN_OR_RETURN(
        Release r,
        Apply(data, plans[k].mechanism, plans[k].targets, absl::StrCat("r", k)));
    out.push_back(std::move(r));
  }
  return out;
}

bool HighRisk(const Rational& posterior) { return posterior >= AbsThreshold(); }

bool Changed(const Rational& difference) {
  return abs(difference) > Pr2PThreshold();
}

// Unbounded contrasts count as changed.
bool ContrastChanged(const RiskReport& r) {
  const std::optional<Rational> c = r.Contrast();
  if (r.ratio && *r.ratio == 0) return true;
  return !c || *c > ContrastThreshold();
}

// Contrast of a report whose ratio may be unbounded.
std::optional<Rational> ContrastOf(const RiskReport& r) {
  if (r.ratio_unbounded || !r.ratio || *r.ratio == 0) return std::nullopt;
  return r.Contrast();
}

bool Within(const std::optional<Rational>& contrast, const Rational& bound) {
  return contrast && *contrast <= bound;
}

void Add(ScenarioVerdict& v, std::string name, std::optional<Rational> value) {
  v.evidence.push_back({std::move(name), std::move(value)});
}

void Check(ScenarioVerdict& v, bool ok, std::string what) {
  if (!ok) v.failed_checks.push_back(std::move(what));
}

void Set(ScenarioVerdict& v, Column c, Verdict verdict) {
  v.verdicts[static_cast<int>(c)] = verdict;
}

std::optional<Rational> Required(const std::optional<Rational>& x) { return x; }

// Persons with unique (block, sex, age) so that records link one to one.
std::vector<Person> DistinctPersons(int count, int block,
                                    const std::vector<int>& sensitive) {
  std::vector<Person> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(MakePerson(i + 1, block, i % 2, 20 + 3 * i, 0, 0,
                             sensitive[i]));
  }
  return out;
}

}  // namespace

std::string_view ColumnName(Column c) {
  switch (c) {
    case Column::kAbsLink:
      return "AbsLink";
    case Column::kAbs:
      return "Abs";
    case Column::kPr2P:
      return "Pr2P";
    case Column::kCf:
      return "Cf";
  }
  return "?";
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kNotApplicable:
      return "not_applicable";
    case Verdict::kUnassessed:
      return "unassessed";
  }
  return "?";
}

std::string_view VerdictSymbol(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "y";
    case Verdict::kFail:
      return "n";
    case Verdict::kNotApplicable:
      return "NA";
    case Verdict::kUnassessed:
      return "?";
  }
  return "?";
}

absl::StatusOr<Verdict> ParseVerdict(std::string_view name) {
  for (Verdict v : {Verdict::kPass, Verdict::kFail, Verdict::kNotApplicable,
                    Verdict::kUnassessed}) {
    if (VerdictName(v) == name || VerdictSymbol(v) == name) return v;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown verdict '", std::string(name), "'"));
}

const Evidence* ScenarioVerdict::Find(std::string_view name) const {
  for (const Evidence& e : evidence) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Rational AbsThreshold() { return R(1, 2); }
Rational Pr2PThreshold() { return R(1, 10); }
Rational ContrastThreshold() { return R(11, 10); }

absl::StatusOr<ScenarioVerdict> ScenarioUninformative(uint64_t seed) {
  ScenarioVerdict v;
  v.scenario = "uninformative";
  v.row = "Uninformative Statistics";
  v.expected = {na, n, y, y};
  v.predicates = {
      "AbsLink: not applicable without a record-level product",
      "Abs: y iff posterior < 1/2",
      "Pr2P: y iff |posterior - prior| <= 1/10",
      "Cf: y iff max(r, 1/r) <= 11/10 for the realized removal pair",
  };

  const Schema schema = DeskSchema();
  SDL_ASSIGN_OR_RETURN(
      const Dataset data,
      Dataset::Create(schema, DistinctPersons(5, 1, {1, 0, 1, 0, 0}), {{1, 0}}));
  auto attacker = [&](const Rational& prior) {
    std::vector<CandidatePerson> universe;
    for (const Person& p : data.persons()) {
      universe.push_back(p.id == 1 ? UnknownSensitive(p, {1 - prior, prior})
                                   : Known(p));
    }
    return MakeAttacker("neighbor", data, std::move(universe));
  };
  const AttackerModel neighbor = attacker(R(9, 10));

  const std::vector<ReleasePlan> plans = {
      {Perturbed(R(99, 100), DeriveSeed(seed, "scenarios/uninformative/total")),
       {}}};
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, plans));

  SDL_ASSIGN_OR_RETURN(const RiskReport link,
                       AbsRiskWithLinking(neighbor, releases, 1, 1));
  SDL_ASSIGN_OR_RETURN(const RiskReport abs,
                       AbsRiskWithoutLinking(neighbor, releases, 1, 1));
  SDL_ASSIGN_OR_RETURN(
      const RiskReport pr2p,
      PriorToPosterior(neighbor, releases, 1, 1, Methodology::kPr2PDiff));
  SDL_ASSIGN_OR_RETURN(
      const RiskReport cf,
      CounterfactualBayesFromData(neighbor, data, plans, 1, 1,
                                  CfConvention::kRemoval));

  Set(v, Column::kAbsLink,
      link.not_applicable ? na : (HighRisk(*link.posterior) ? n : y));
  Set(v, Column::kAbs, HighRisk(*abs.posterior) ? n : y);
  Set(v, Column::kPr2P, Changed(*pr2p.difference) ? n : y);
  Set(v, Column::kCf, ContrastChanged(cf) ? n : y);
  Add(v, "abs_posterior", abs.posterior);
  Add(v, "pr2p_difference", pr2p.difference);
  Add(v, "cf_ratio", cf.ratio);
  Add(v, "cf_exp_epsilon", cf.exp_epsilon);

  // A low prior clears the same release, so the Abs verdict tracks the
  // prior rather than the release.
  SDL_ASSIGN_OR_RETURN(
      const RiskReport low,
      AbsRiskWithoutLinking(attacker(R(1, 10)), releases, 1, 1));
  Add(v, "abs_posterior_low_prior", low.posterior);
  Check(v, *low.posterior == R(1, 10), "low-prior posterior equals its prior");

  // An exact table is informative, so the same attacker moves.
  const std::vector<ReleasePlan> exact = {
      {Identity(), {BlockTable("sensitive", {MarginAttribute::kSensitive})}}};
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> exact_releases,
                       ApplyAll(data, exact));
  SDL_ASSIGN_OR_RETURN(const RiskReport control,
                       PriorToPosterior(neighbor, exact_releases, 1, 1,
                                        Methodology::kPr2PDiff));
  Add(v, "identity_control_pr2p_difference", control.difference);
  Check(v, *pr2p.difference == 0, "perturbed total leaves the prior unchanged");
  Check(v, cf.ratio && *cf.ratio == 1, "counterfactual ratio is exactly 1");
  Check(v, *control.difference > 0, "identity control moves the posterior");
  return v;
}

// `expected` holds the table row, which presumes k >= 2.
absl::StatusOr<ScenarioVerdict> ScenarioReconstructionTenclones(uint64_t seed,
                                                                int k) {
  (void)seed;  // every release here is deterministic
  if (k < 1) return absl::InvalidArgumentError("k must be positive");
  ScenarioVerdict v;
  v.scenario = "reconstruction";
  v.row = "Avoiding Reconstruction";
  v.expected = {n, y, y, y};
  v.predicates = {
      "AbsLink: y iff max per-record joint >= 1/2",
      "Abs: y iff posterior >= 1/2",
      "Pr2P: y iff |posterior - prior| > 1/10",
      "Cf: y iff max(r, 1/r) > 11/10 for the realized removal pair",
  };

  const Schema schema = DeskSchema();
  std::vector<Person> persons;
  for (int i = 0; i < k; ++i) persons.push_back(MakePerson(i + 1, 1, 0, 30, 0, 0, 1));
  SDL_ASSIGN_OR_RETURN(const Dataset data,
                       Dataset::Create(schema, persons, {{1, 0}}));
  std::vector<CandidatePerson> universe;
  for (const Person& p : persons) universe.push_back(UnknownSensitive(p, Uniform(2)));
  const AttackerModel attacker = MakeAttacker("clones", data, universe);

  const std::vector<ReleasePlan> plans = {{Identity(), {RecordListSpec{}}}};
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, plans));
  SDL_ASSIGN_OR_RETURN(const RiskReport link,
                       AbsRiskWithLinking(attacker, releases, 1, 1));
  SDL_ASSIGN_OR_RETURN(const RiskReport abs,
                       AbsRiskWithoutLinking(attacker, releases, 1, 1));
  SDL_ASSIGN_OR_RETURN(
      const RiskReport pr2p,
      PriorToPosterior(attacker, releases, 1, 1, Methodology::kPr2PDiff));
  SDL_ASSIGN_OR_RETURN(const RiskReport cf,
                       CounterfactualBayesFromData(attacker, data, plans, 1, 1,
                                                   CfConvention::kRemoval));

  Set(v, Column::kAbsLink, HighRisk(*link.posterior) ? y : n);
  Set(v, Column::kAbs, HighRisk(*abs.posterior) ? y : n);
  Set(v, Column::kPr2P, Changed(*pr2p.difference) ? y : n);
  Set(v, Column::kCf, ContrastChanged(cf) ? y : n);
  Add(v, "k", R(k));
  Add(v, "abslink_joint_max", link.posterior);
  Add(v, "abs_posterior", abs.posterior);
  Add(v, "pr2p_difference", pr2p.difference);
  Add(v, "cf_ratio", cf.ratio);

  bool symmetric = link.per_record.size() == static_cast<size_t>(k);
  for (const Rational& j : link.per_record) symmetric = symmetric && j == R(1, k);
  Check(v, symmetric, "every clone row carries joint 1/k");
  Check(v, *abs.posterior == 1, "sensitive value learned with certainty");

  // The published full cross tabulation pins the microdata histogram.
  SDL_ASSIGN_OR_RETURN(const Table full, Tabulate(data, FullCrossTabSpec(schema)));
  const std::vector<Table> tables = {full};
  SDL_ASSIGN_OR_RETURN(const ConstraintSystem system,
                       BuildConstraints(tables, schema, data.geography()));
  SDL_ASSIGN_OR_RETURN(const ReconstructionResult solved, SolveAll(system));
  Add(v, "reconstruction_solutions", R(static_cast<long>(solved.solution_count)));
  Check(v, solved.unique(), "full cross tabulation reconstructs uniquely");
  return v;
}

absl::StatusOr<ScenarioVerdict> ScenarioGeneralizableMontana(uint64_t seed) {
  (void)seed;
  ScenarioVerdict v;
  v.scenario = "generalizable";
  v.row = "Generalizable Inference";
  v.expected = {n, n, y, y};
  v.predicates = {
      "sensitive attribute: 0 = majority race, 1 = any other race",
      "AbsLink: y iff max per-record joint < 1/2",
      "Abs: y iff posterior < 1/2",
      "Pr2P: y iff |posterior - prior| <= 1/10, prior = population share",
      "Cf: y iff max(r, 1/r) <= 11/10 for the realized removal pair",
  };

  // Twelve residents of one region over three blocks; one is not in the
  // majority group.
  const Schema schema = DeskSchema();
  std::vector<Person> persons;
  for (int i = 0; i < 12; ++i) {
    persons.push_back(
        MakePerson(i + 1, 1 + i / 4, i % 2, 20 + 4 * i, 0, 0, i == 11 ? 1 : 0));
  }
  const std::map<int, int> geography = {{1, 0}, {2, 0}, {3, 0}};
  SDL_ASSIGN_OR_RETURN(const Dataset data,
                       Dataset::Create(schema, persons, geography));
  const Rational share = R(89, 100);
  std::vector<CandidatePerson> universe;
  for (const Person& p : persons) {
    universe.push_back(UnknownSensitive(p, {share, 1 - share}));
  }
  const AttackerModel attacker = MakeAttacker("demographer", data, universe);

  const std::vector<ReleasePlan> plans = {
      {Identity(),
       {BlockTable("race_by_region", {MarginAttribute::kSensitive},
                   GeoLevel::kRegion)}},
      {Identity(),
       {Records({Attribute::kBlock, Attribute::kSex, Attribute::kAge,
                 Attribute::kEthnicity})}},
  };
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, plans));
  SDL_ASSIGN_OR_RETURN(const RiskReport link,
                       AbsRiskWithLinking(attacker, releases, 1, 0));
  SDL_ASSIGN_OR_RETURN(const RiskReport abs,
                       AbsRiskWithoutLinking(attacker, releases, 1, 0));
  SDL_ASSIGN_OR_RETURN(
      const RiskReport pr2p,
      PriorToPosterior(attacker, releases, 1, 0, Methodology::kPr2PDiff));
  SDL_ASSIGN_OR_RETURN(const RiskReport cf,
                       CounterfactualBayesFromData(attacker, data, plans, 1, 0,
                                                   CfConvention::kRemoval));

  Set(v, Column::kAbsLink, HighRisk(*link.posterior) ? n : y);
  Set(v, Column::kAbs, HighRisk(*abs.posterior) ? n : y);
  Set(v, Column::kPr2P, Changed(*pr2p.difference) ? n : y);
  Set(v, Column::kCf, ContrastChanged(cf) ? n : y);
  Add(v, "majority_share", share);
  Add(v, "abslink_joint_max", link.posterior);
  Add(v, "abs_posterior", abs.posterior);
  Add(v, "pr2p_difference", pr2p.difference);
  Add(v, "cf_ratio", cf.ratio);
  Check(v, *abs.posterior >= share, "posterior reaches the majority share");

  // Without the target in the data the same tables still say what a
  // resident of the region is likely to be.
  SDL_ASSIGN_OR_RETURN(const Dataset without, data.Without(1));
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> absent,
                       ApplyAll(without, plans));
  SDL_ASSIGN_OR_RETURN(
      const std::optional<WorldPosterior> post,
      EnumeratePosterior(attacker, absent,
                         {TargetTreatment::Kind::kRemoved, 1, {}}));
  if (!post) return absl::UnavailableError("world enumeration exceeds the cap");
  SDL_ASSIGN_OR_RETURN(const Rational latent,
                       LatentMarginal(attacker, *post, 1, 0));
  Add(v, "absent_target_posterior", latent);
  Check(v, latent == share, "absent target inference equals the population share");
  return v;
}

absl::StatusOr<ScenarioVerdict> ScenarioComposition(uint64_t seed) {
  ScenarioVerdict v;
  v.scenario = "composition";
  v.row = "Composition";
  v.expected = {open, open, open, y};
  v.predicates = {
      "AbsLink, Abs, Pr2P: left open",
      "Cf: y iff the joint likelihood ratio of both releases stays within "
      "the ledger's e^epsilon over every output class",
  };

  const Schema schema = DeskSchema();
  SDL_ASSIGN_OR_RETURN(
      const Dataset data,
      Dataset::Create(schema, DistinctPersons(3, 1, {1, 0, 0}), {{1, 0}}));
  const TableSpec count = BlockTable("population", {});
  const std::vector<ReleasePlan> plans = {
      {Geometric(R(1, 2), 1, DeriveSeed(seed, "scenarios/composition/first")),
       {count}},
      {Geometric(R(1, 2), 1, DeriveSeed(seed, "scenarios/composition/second")),
       {count}},
  };
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, plans));
  SDL_ASSIGN_OR_RETURN(const CompositionLedger one,
                       CompositionLedger().Compose(releases[0]));
  SDL_ASSIGN_OR_RETURN(const CompositionLedger both, one.Compose(releases[1]));
  const std::optional<Rational> single_bound = one.total().ExpBound();
  const std::optional<Rational> ledger_bound = both.total().ExpBound();
  Add(v, "single_release_exp_epsilon", single_bound);
  Add(v, "ledger_exp_epsilon", ledger_bound);
  Check(v, single_bound == Required(R(2)), "single release ledger is e^epsilon = 2");

  SDL_ASSIGN_OR_RETURN(const Dataset removed, data.Without(1));
  SDL_ASSIGN_OR_RETURN(const Dataset blanked,
                       data.Replacing(BlankRecordFor(*data.Find(1))));
  SDL_ASSIGN_OR_RETURN(const RatioCheck check_removed,
                       ComposedRatioBoundCheck(plans, data, removed));
  SDL_ASSIGN_OR_RETURN(const RatioCheck check_reverse,
                       ComposedRatioBoundCheck(plans, removed, data));
  SDL_ASSIGN_OR_RETURN(const RatioCheck check_blank,
                       ComposedRatioBoundCheck(plans, data, blanked));
  Add(v, "joint_worst_ratio_removal", check_removed.worst);
  Add(v, "joint_worst_ratio_removal_reverse", check_reverse.worst);
  Add(v, "joint_worst_ratio_blank", check_blank.worst);
  const bool composes = ledger_bound && check_removed.within &&
                        check_reverse.within && check_blank.within &&
                        check_removed.bound == *ledger_bound;
  Set(v, Column::kAbsLink, open);
  Set(v, Column::kAbs, open);
  Set(v, Column::kPr2P, open);
  Set(v, Column::kCf, composes ? y : n);

  // Two deterministic releases that are harmless one at a time: a
  // suppressed race table and an exact block total. Together they pin the
  // suppressed cell.
  std::vector<Person> persons = {MakePerson(1, 1, 0, 30, 0, 0, 0),
                                 MakePerson(2, 1, 1, 33, 1, 0, 0),
                                 MakePerson(3, 1, 0, 36, 1, 0, 0),
                                 MakePerson(4, 1, 1, 39, 1, 0, 0)};
  SDL_ASSIGN_OR_RETURN(const Dataset suppressed_data,
                       Dataset::Create(schema, persons, {{1, 0}}));
  persons.push_back(MakePerson(5, 1, 0, 42, 0, 0, 0));
  std::vector<CandidatePerson> universe;
  for (const Person& p : persons) {
    universe.push_back(Unknown(p, Attribute::kRace, Uniform(3),
                               p.id == 1 ? R(1) : R(1, 2)));
  }
  const AttackerModel attacker =
      MakeAttacker("table reader", suppressed_data, universe);
  const std::vector<ReleasePlan> pair = {
      {Suppress(3), {BlockTable("race", {MarginAttribute::kRace})}},
      {Identity(), {BlockTable("population", {})}},
  };
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> pair_releases,
                       ApplyAll(suppressed_data, pair));
  auto first_race_count_is_one = [](const World& w) {
    int count = 0;
    for (const Person& p : w.data.persons()) count += p.race == 0 ? 1 : 0;
    return count == 1;
  };
  auto event_probability =
      [&](std::span<const Release> observed) -> absl::StatusOr<Rational> {
    SDL_ASSIGN_OR_RETURN(const std::optional<WorldPosterior> post,
                         EnumeratePosterior(attacker, observed));
    if (!post) return absl::UnavailableError("world enumeration exceeds the cap");
    return Probability(*post, first_race_count_is_one);
  };
  SDL_ASSIGN_OR_RETURN(const Rational p_first,
                       event_probability(std::span(pair_releases).first(1)));
  SDL_ASSIGN_OR_RETURN(const Rational p_second,
                       event_probability(std::span(pair_releases).last(1)));
  SDL_ASSIGN_OR_RETURN(const Rational p_joint, event_probability(pair_releases));
  Add(v, "suppressed_cell_pinned_first_only", p_first);
  Add(v, "suppressed_cell_pinned_second_only", p_second);
  Add(v, "suppressed_cell_pinned_jointly", p_joint);
  Check(v, p_first < 1 && p_second < 1 && p_joint == 1,
        "suppressed cell pinned only by the pair");
  return v;
}

absl::StatusOr<ScenarioVerdict> ScenarioMultipleAttackers(uint64_t seed) {
  ScenarioVerdict v;
  v.scenario = "multiple_attackers";
  v.row = "Multiple Attackers";
  v.expected = {n, n, y, y};
  v.predicates = {
      "AbsLink, Abs: y iff the high-risk flag (>= 1/2) agrees across "
      "attackers",
      "Pr2P: y iff every output keeps max(post/prior, prior/post) within "
      "e^epsilon for every attacker",
      "Cf: y iff every removal pair keeps max(r, 1/r) within e^epsilon for "
      "every attacker",
  };

  Schema schema = DeskSchema();
  schema.sensitive_levels = 4;
  SDL_ASSIGN_OR_RETURN(
      const Dataset data,
      Dataset::Create(schema, DistinctPersons(3, 1, {2, 0, 3}), {{1, 0}}));
  const int value = 2;
  auto attacker = [&](std::string name, std::vector<Rational> prior) {
    std::vector<CandidatePerson> universe;
    for (const Person& p : data.persons()) {
      universe.push_back(p.id == 1 ? UnknownSensitive(p, prior) : Known(p));
    }
    return MakeAttacker(std::move(name), data, std::move(universe));
  };
  const std::vector<AttackerModel> attackers = {
      attacker("neighbor", {R(1, 30), R(1, 30), R(9, 10), R(1, 30)}),
      attacker("diffuse", Uniform(4)),
  };

  const std::vector<ReleasePlan> plans = {
      {Geometric(R(3, 4), 2, DeriveSeed(seed, "scenarios/multiple/noise")),
       {BlockTable("sensitive", {MarginAttribute::kSensitive})}},
      {Identity(), {Records({Attribute::kBlock, Attribute::kSex, Attribute::kAge})}},
  };
  const std::optional<Rational> bound = ComposedExpBound(plans);
  if (!bound) return absl::InternalError("geometric plan lacks an exact bound");
  Add(v, "exp_epsilon", bound);
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, plans));
  const std::vector<ReleasePlan> blind = {
      {Perturbed(R(1, 2), DeriveSeed(seed, "scenarios/multiple/total")), {}}};
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> blind_releases,
                       ApplyAll(data, blind));

  std::vector<bool> link_flags, abs_flags;
  bool pr2p_within = true;
  bool cf_within = true;
  for (const AttackerModel& a : attackers) {
    SDL_ASSIGN_OR_RETURN(const RiskReport link,
                         AbsRiskWithLinking(a, releases, 1, value));
    SDL_ASSIGN_OR_RETURN(const RiskReport abs,
                         AbsRiskWithoutLinking(a, releases, 1, value));
    SDL_ASSIGN_OR_RETURN(
        const RiskReport pr2p,
        PriorToPosteriorOverOutputs(a, data, plans, 1, value));
    SDL_ASSIGN_OR_RETURN(
        const RiskReport cf,
        CounterfactualBayesOverOutputs(a, data, plans, 1, value,
                                       CfConvention::kRemoval, CfMode::kWorst));
    SDL_ASSIGN_OR_RETURN(
        const RiskReport control,
        PriorToPosterior(a, blind_releases, 1, value, Methodology::kPr2PDiff));
    link_flags.push_back(HighRisk(*link.posterior));
    abs_flags.push_back(HighRisk(*abs.posterior));
    const std::optional<Rational> pr2p_contrast = ContrastOf(pr2p);
    const std::optional<Rational> cf_contrast = ContrastOf(cf);
    pr2p_within = pr2p_within && Within(pr2p_contrast, *bound);
    cf_within = cf_within && Within(cf_contrast, *bound);
    Add(v, absl::StrCat(a.name, "_abslink_joint_max"), link.posterior);
    Add(v, absl::StrCat(a.name, "_abs_posterior"), abs.posterior);
    Add(v, absl::StrCat(a.name, "_pr2p_worst_contrast"), pr2p_contrast);
    Add(v, absl::StrCat(a.name, "_cf_worst_contrast"), cf_contrast);
    Add(v, absl::StrCat(a.name, "_blind_pr2p_difference"), control.difference);
    Check(v, *control.difference == 0,
          absl::StrCat(a.name, ": data-independent release leaves the prior"));
    // Every output keeps the posterior within [prior / c, prior * c], so
    // the Abs flag is the same for every output, not only the realized one.
    if (pr2p_contrast) {
      const Rational lo = *pr2p.prior / *pr2p_contrast;
      const Rational hi = *pr2p.prior * *pr2p_contrast;
      Add(v, absl::StrCat(a.name, "_abs_lower_bound"), lo);
      Add(v, absl::StrCat(a.name, "_abs_upper_bound"), hi);
      Check(v, HighRisk(lo) == HighRisk(hi) || (hi >= 1 && HighRisk(lo)),
            absl::StrCat(a.name, ": Abs flag holds for every output"));
    }
  }
  Set(v, Column::kAbsLink, link_flags[0] == link_flags[1] ? y : n);
  Set(v, Column::kAbs, abs_flags[0] == abs_flags[1] ? y : n);
  Set(v, Column::kPr2P, pr2p_within ? y : n);
  Set(v, Column::kCf, cf_within ? y : n);
  return v;
}

absl::StatusOr<ScenarioVerdict> ScenarioBrittleness(uint64_t seed) {
  ScenarioVerdict v;
  v.scenario = "brittleness";
  v.row = "Resists Brittleness";
  v.expected = {y, y, y, y};
  v.predicates = {
      "attacker conditions on every other record versus knowing none",
      "AbsLink, Abs: y iff revealing the others raises the suppression risk "
      "and the revealed risk is >= 1/2",
      "Pr2P: y iff revealing the others raises |posterior - prior| above "
      "1/10",
      "Cf: y iff geometric worst contrast stays within e^epsilon with and "
      "without reveals while the revealed suppression contrast exceeds 11/10",
  };

  const Schema schema = DeskSchema();
  SDL_ASSIGN_OR_RETURN(
      const Dataset data,
      Dataset::Create(schema, DistinctPersons(3, 1, {1, 0, 0}), {{1, 0}}));
  auto attacker = [&](std::string name, bool revealed) {
    std::vector<CandidatePerson> universe;
    for (const Person& p : data.persons()) {
      universe.push_back(p.id == 1 || !revealed
                             ? UnknownSensitive(p, Uniform(2))
                             : Known(p));
    }
    return MakeAttacker(std::move(name), data, std::move(universe));
  };
  const AttackerModel hidden = attacker("unrevealed", false);
  const AttackerModel revealed = attacker("revealed", true);
  const TableSpec sensitive = BlockTable("sensitive", {MarginAttribute::kSensitive});

  const std::vector<ReleasePlan> suppress = {
      {Suppress(3), {sensitive}},
      {Identity(), {Records({Attribute::kBlock, Attribute::kSex, Attribute::kAge})}},
  };
  SDL_ASSIGN_OR_RETURN(const std::vector<Release> releases,
                       ApplyAll(data, suppress));
  struct Risks {
    RiskReport link, abs, pr2p, cf;
  };
  auto assess = [&](const AttackerModel& a) -> absl::StatusOr<Risks> {
    Risks r;
    SDL_ASSIGN_OR_RETURN(r.link, AbsRiskWithLinking(a, releases, 1, 1));
    SDL_ASSIGN_OR_RETURN(r.abs, AbsRiskWithoutLinking(a, releases, 1, 1));
    SDL_ASSIGN_OR_RETURN(
        r.pr2p, PriorToPosterior(a, releases, 1, 1, Methodology::kPr2PDiff));
    SDL_ASSIGN_OR_RETURN(r.cf, CounterfactualBayesFromData(
                                   a, data, suppress, 1, 1,
                                   CfConvention::kRemoval));
    return r;
  };
  SDL_ASSIGN_OR_RETURN(const Risks before, assess(hidden));
  SDL_ASSIGN_OR_RETURN(const Risks after, assess(revealed));
  Add(v, "suppress_abslink_unrevealed", before.link.posterior);
  Add(v, "suppress_abslink_revealed", after.link.posterior);
  Add(v, "suppress_abs_unrevealed", before.abs.posterior);
  Add(v, "suppress_abs_revealed", after.abs.posterior);
  Add(v, "suppress_pr2p_difference_unrevealed", before.pr2p.difference);
  Add(v, "suppress_pr2p_difference_revealed", after.pr2p.difference);
  Add(v, "suppress_cf_ratio_unrevealed", before.cf.ratio);
  Add(v, "suppress_cf_ratio_revealed", after.cf.ratio);
  Check(v, *before.abs.posterior < 1, "suppression hides the value with no reveals");
  Check(v, *after.abs.posterior == 1, "two reveals expose the third value");

  // A changed value moves two cells of the histogram, so the declared
  // sensitivity is 2.
  const std::vector<ReleasePlan> geometric = {
      {Geometric(R(1, 2), 2, DeriveSeed(seed, "scenarios/brittleness/noise")),
       {sensitive}}};
  const std::optional<Rational> bound = ComposedExpBound(geometric);
  if (!bound) return absl::InternalError("geometric plan lacks an exact bound");
  Add(v, "geometric_exp_epsilon", bound);
  bool geometric_within = true;
  for (const AttackerModel* a : {&hidden, &revealed}) {
    SDL_ASSIGN_OR_RETURN(
        const RiskReport worst,
        CounterfactualBayesOverOutputs(*a, data, geometric, 1, 1,
                                       CfConvention::kRemoval, CfMode::kWorst));
    const std::optional<Rational> c = ContrastOf(worst);
    Add(v, absl::StrCat("geometric_cf_worst_contrast_", a->name), c);
    geometric_within = geometric_within && Within(c, *bound);
  }

  auto raised = [](const RiskReport& b, const RiskReport& a) {
    return *a.posterior > *b.posterior && HighRisk(*a.posterior);
  };
  Set(v, Column::kAbsLink, raised(before.link, after.link) ? y : n);
  Set(v, Column::kAbs, raised(before.abs, after.abs) ? y : n);
  Set(v, Column::kPr2P,
      Changed(*after.pr2p.difference) &&
              abs(*after.pr2p.difference) > abs(*before.pr2p.difference)
          ? y
          : n);
  Set(v, Column::kCf, geometric_within && ContrastChanged(after.cf) ? y : n);
  return v;
}

absl::StatusOr<std::vector<ScenarioVerdict>> RunAll(uint64_t seed) {
  std::vector<ScenarioVerdict> out;
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict a, ScenarioUninformative(seed));
  out.push_back(std::move(a));
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict b, ScenarioReconstructionTenclones(seed));
  out.push_back(std::move(b));
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict c, ScenarioGeneralizableMontana(seed));
  out.push_back(std::move(c));
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict d, ScenarioComposition(seed));
  out.push_back(std::move(d));
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict e, ScenarioMultipleAttackers(seed));
  out.push_back(std::move(e));
  SDL_ASSIGN_OR_RETURN(ScenarioVerdict f, ScenarioBrittleness(seed));
  out.push_back(std::move(f));
  return out;
}

bool AllMatch(const std::vector<ScenarioVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const ScenarioVerdict& v) { return v.Matches(); });
}

std::string RenderTable(const std::vector<ScenarioVerdict>& verdicts) {
  auto pad = [](std::string s, size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  std::string out = pad("", 26);
  for (int c = 0; c < kColumns; ++c) {
    out += pad(std::string(ColumnName(static_cast<Column>(c))), 12);
  }
  out += "status\n";
  for (const ScenarioVerdict& v : verdicts) {
    out += pad(v.row, 26);
    for (int c = 0; c < kColumns; ++c) {
      std::string cell(VerdictSymbol(v.verdicts[c]));
      if (v.verdicts[c] != v.expected[c]) {
        absl::StrAppend(&cell, " (want ", std::string(VerdictSymbol(v.expected[c])), ")");
      }
      out += pad(cell, 12);
    }
    out += v.Matches() ? "match" : "MISMATCH";
    out += "\n";
    for (const std::string& f : v.failed_checks) {
      absl::StrAppend(&out, "  check failed: ", f, "\n");
    }
  }
  return out;
}

}  // namespace sdl
