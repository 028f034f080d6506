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

#include <set>
#include <stdexcept>
#include <utility>

#include "absl/strings/str_cat.h"

namespace sdl {
namespace {

// Parse failures inside this file unwind to the public entry point, which
// turns them into InvalidArgument.
class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void Fail(const std::string& message) { throw JsonError(message); }

template <typename T>
T Value(absl::StatusOr<T> v) {
  if (!v.ok()) Fail(std::string(v.status().message()));
  return *std::move(v);
}

template <typename F>
auto Guard(F&& f) -> absl::StatusOr<decltype(f())> {
  try {
    return f();
  } catch (const JsonError& e) {
    return absl::InvalidArgumentError(e.what());
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Fail(absl::StrCat("missing field '", key, "'"));
  }
  return j.at(key);
}

template <typename T>
T Get(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

Rational ParseR(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) Fail("rational must be a \"p/q\" string or integer");
  return Value(ParseRational(j.get<std::string>()));
}

Json Optional(const std::optional<Rational>& r) {
  return r ? ToJson(*r) : Json(nullptr);
}

AgeBinSystem ParseBins(const Json& j) {
  if (j.is_string()) return Value(AgeBinPreset(j.get<std::string>()));
  std::vector<AgeBin> bins;
  for (const Json& b : Field(j, "bins")) {
    bins.push_back({b.at("lo").get<int>(), b.at("hi").get<int>()});
  }
  return Value(AgeBinSystem::Create(Get<std::string>(j, "name", "custom"),
                                    std::move(bins)));
}

Schema ParseSchema(const Json& j) {
  if (j.is_string()) return Value(SchemaPreset(j.get<std::string>()));
  Schema s;
  s.name = Get<std::string>(j, "name", "custom");
  s.sex_levels = Get<int>(j, "sex_levels", s.sex_levels);
  if (j.contains("age_bins")) s.age_bins = ParseBins(j.at("age_bins"));
  s.race_levels = Get<int>(j, "race_levels", s.race_levels);
  s.ethnicity_levels = Get<int>(j, "ethnicity_levels", s.ethnicity_levels);
  s.sensitive_levels = Get<int>(j, "sensitive_levels", s.sensitive_levels);
  if (absl::Status st = s.Validate(); !st.ok()) Fail(std::string(st.message()));
  return s;
}

std::map<int, int> ParseGeography(const Json& j) {
  std::map<int, int> geo;
  for (const Json& e : j) {
    const int block = Field(e, "block").get<int>();
    if (!geo.emplace(block, Get<int>(e, "region", 0)).second) {
      Fail(absl::StrCat("block ", block, " listed twice"));
    }
  }
  return geo;
}

TableSpec ParseTableSpec(const Json& j) {
  TableSpec t;
  t.name = Get<std::string>(j, "name", "");
  t.geo_level = Value(ParseGeoLevel(Get<std::string>(j, "geo_level", "block")));
  for (const Json& m : Get<Json>(j, "margin", Json::array())) {
    t.margin.push_back(Value(ParseMarginAttribute(m.get<std::string>())));
  }
  if (j.contains("age_bins")) t.age_bins = ParseBins(j.at("age_bins"));
  return t;
}

std::vector<Attribute> ParseAttributes(const Json& j) {
  std::vector<Attribute> out;
  for (const Json& a : j) out.push_back(Value(ParseAttribute(a.get<std::string>())));
  return out;
}

Json AttributesJson(std::span<const Attribute> attributes) {
  Json out = Json::array();
  for (Attribute a : attributes) out.push_back(std::string(AttributeName(a)));
  return out;
}

ProductTarget ParseTarget(const Json& j) {
  if (j.contains("table")) return ParseTableSpec(j.at("table"));
  if (j.contains("records")) {
    RecordListSpec r;
    const Json& rec = j.at("records");
    if (rec.is_object() && rec.contains("columns")) {
      r.columns = ParseAttributes(rec.at("columns"));
    }
    return r;
  }
  Fail("target needs a 'table' or 'records' field");
}

Table ParseTable(const Json& j, const Schema& schema) {
  TableSpec spec = ParseTableSpec(Field(j, "spec"));
  std::vector<int> sizes;
  for (MarginAttribute m : spec.margin) {
    sizes.push_back(MarginLevels(m, spec, schema));
  }
  const Json& cells = Field(j, "cells");
  std::set<int> geo_set;
  for (const Json& c : cells) geo_set.insert(Field(c, "geo").get<int>());
  Table t(spec, std::vector<int>(geo_set.begin(), geo_set.end()), sizes);
  if (cells.size() != t.size()) {
    Fail(absl::StrCat("table '", spec.name, "' needs ", t.size(),
                      " cells, got ", cells.size()));
  }
  std::vector<bool> seen(t.size(), false);
  for (const Json& c : cells) {
    std::vector<int> levels = Field(c, "margin").get<std::vector<int>>();
    if (levels.size() != sizes.size()) Fail("margin arity mismatch");
    for (size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] < 0 || levels[k] >= sizes[k]) Fail("margin level out of range");
    }
    const size_t index =
        t.Index(*t.GeoIndex(c.at("geo").get<int>()), t.EncodeTuple(levels));
    if (seen[index]) Fail("duplicate table cell");
    seen[index] = true;
    const Json& count = Field(c, "count");
    if (count.is_null()) {
      t.mutable_cell(index).reset();
    } else {
      t.mutable_cell(index) = count.get<int64_t>();
    }
  }
  return t;
}

MechanismSpec ParseMechanism(const Json& j) {
  MechanismSpec m;
  m.kind = Value(ParseMechanismKind(Field(j, "kind").get<std::string>()));
  if (j.contains("alpha")) m.alpha = ParseR(j.at("alpha"));
  m.sensitivity = Get<int>(j, "sensitivity", m.sensitivity);
  if (j.contains("swap_rate")) m.swap_rate = ParseR(j.at("swap_rate"));
  if (j.contains("swap_keys")) m.swap_keys = ParseAttributes(j.at("swap_keys"));
  m.threshold = Get<int>(j, "threshold", m.threshold);
  m.complementary = Get<bool>(j, "complementary", m.complementary);
  if (j.contains("coarse_bins") && !j.at("coarse_bins").is_null()) {
    m.coarse_bins = ParseBins(j.at("coarse_bins"));
  }
  m.seed = Get<uint64_t>(j, "seed", 0);
  if (absl::Status st = ValidateMechanism(m); !st.ok()) {
    Fail(std::string(st.message()));
  }
  return m;
}

Person ParsePerson(const Json& j) {
  Person p;
  p.id = Field(j, "id").get<int64_t>();
  p.block = Get<int>(j, "block", 0);
  p.sex = Get<int>(j, "sex", 0);
  p.age = Get<int>(j, "age", 0);
  p.race = Get<int>(j, "race", 0);
  p.ethnicity = Get<int>(j, "ethnicity", 0);
  p.sensitive = Get<int>(j, "sensitive", 0);
  p.imputed = Get<bool>(j, "imputed", false);
  return p;
}

Json SubgroupJson(const SubgroupGap& g) {
  return {{"persons", g.persons},
          {"in_sample", ToJson(g.in_sample)},
          {"loo", ToJson(g.loo)},
          {"gap", ToJson(g.gap)}};
}

Json GroupsJson(const std::vector<GroupAccuracy>& groups) {
  Json out = Json::array();
  for (const GroupAccuracy& g : groups) {
    out.push_back({{"label", g.label},
                   {"persons", g.persons},
                   {"predicted", g.predicted},
                   {"correct", g.correct}});
  }
  return out;
}

Json EquationsJson(const std::vector<Equation>& equations) {
  Json out = Json::array();
  for (const Equation& e : equations) {
    out.push_back({{"vars", e.vars}, {"rhs", e.rhs}, {"label", e.label}});
  }
  return out;
}

}  // namespace

absl::StatusOr<Json> ParseJson(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  return j;
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

Json ToJson(const Rational& r) { return FormatRational(r); }

absl::StatusOr<Rational> RationalFromJson(const Json& j) {
  return Guard([&] { return ParseR(j); });
}

Json ToJson(const AgeBinSystem& bins) {
  if (bins == DeskAgeBins()) return "desk";
  if (bins == MiniSf1AgeBins()) return "mini_sf1";
  Json list = Json::array();
  for (const AgeBin& b : bins.bins()) list.push_back({{"lo", b.lo}, {"hi", b.hi}});
  return {{"name", bins.name()}, {"bins", list}};
}

absl::StatusOr<AgeBinSystem> AgeBinsFromJson(const Json& j) {
  return Guard([&] { return ParseBins(j); });
}

Json ToJson(const Schema& schema) {
  for (const char* preset : {"desk", "mini_sf1"}) {
    if (schema.name == preset && schema == *SchemaPreset(preset)) return preset;
  }
  return {{"name", schema.name},
          {"sex_levels", schema.sex_levels},
          {"age_bins", ToJson(schema.age_bins)},
          {"race_levels", schema.race_levels},
          {"ethnicity_levels", schema.ethnicity_levels},
          {"sensitive_levels", schema.sensitive_levels}};
}

absl::StatusOr<Schema> SchemaFromJson(const Json& j) {
  return Guard([&] { return ParseSchema(j); });
}

Json ToJson(const PopulationSpec& spec) {
  Json blocks = Json::array();
  for (const BlockSpec& b : spec.blocks) {
    blocks.push_back({{"block", b.block}, {"region", b.region}, {"size", b.size}});
  }
  Json homogeneity = Json::array();
  for (const HomogeneitySpec& h : spec.homogeneity) {
    homogeneity.push_back(
        {{"block", h.block}, {"cell", h.cell}, {"weight", h.weight}});
  }
  return {{"schema", spec.schema},
          {"blocks", blocks},
          {"attribute_distribution", spec.attribute_distribution},
          {"homogeneity", homogeneity},
          {"sensitive_distribution", spec.sensitive_distribution},
          {"imputed_fraction", spec.imputed_fraction},
          {"seed", spec.seed}};
}

absl::StatusOr<PopulationSpec> PopulationSpecFromJson(const Json& j) {
  return Guard([&] {
    PopulationSpec spec;
    spec.schema = Get<std::string>(j, "schema", spec.schema);
    for (const Json& b : Field(j, "blocks")) {
      spec.blocks.push_back({Field(b, "block").get<int>(),
                             Get<int>(b, "region", 0),
                             Field(b, "size").get<int>()});
    }
    spec.attribute_distribution = Get<std::vector<double>>(
        j, "attribute_distribution", {});
    for (const Json& h : Get<Json>(j, "homogeneity", Json::array())) {
      spec.homogeneity.push_back({Field(h, "block").get<int>(),
                                  Field(h, "cell").get<int>(),
                                  Get<double>(h, "weight", 1.0)});
    }
    spec.sensitive_distribution =
        Get<std::vector<double>>(j, "sensitive_distribution", {});
    spec.imputed_fraction = Get<double>(j, "imputed_fraction", 0.0);
    spec.seed = Get<uint64_t>(j, "seed", 0);
    return spec;
  });
}

Json GeographyToJson(const std::map<int, int>& geography) {
  Json out = Json::array();
  for (const auto& [block, region] : geography) {
    out.push_back({{"block", block}, {"region", region}});
  }
  return out;
}

absl::StatusOr<std::map<int, int>> GeographyFromJson(const Json& j) {
  return Guard([&] { return ParseGeography(j); });
}

Json ToJson(const TableSpec& spec) {
  Json margin = Json::array();
  for (MarginAttribute m : spec.margin) {
    margin.push_back(std::string(MarginAttributeName(m)));
  }
  return {{"name", spec.name},
          {"geo_level", std::string(GeoLevelName(spec.geo_level))},
          {"margin", margin},
          {"age_bins", ToJson(spec.age_bins)}};
}

absl::StatusOr<TableSpec> TableSpecFromJson(const Json& j) {
  return Guard([&] { return ParseTableSpec(j); });
}

Json ToJson(const Table& table) {
  Json cells = Json::array();
  for (size_t g = 0; g < table.geos().size(); ++g) {
    for (size_t t = 0; t < table.tuples_per_geo(); ++t) {
      const std::optional<int64_t>& c = table.cell(table.Index(g, t));
      cells.push_back({{"geo", table.geos()[g]},
                       {"margin", table.DecodeTuple(t)},
                       {"count", c ? Json(*c) : Json(nullptr)}});
    }
  }
  return {{"spec", ToJson(table.spec())}, {"cells", cells}};
}

absl::StatusOr<Table> TableFromJson(const Json& j, const Schema& schema) {
  return Guard([&] { return ParseTable(j, schema); });
}

std::string TableToCsv(const Table& table) {
  std::string out = "geo";
  for (MarginAttribute m : table.spec().margin) {
    absl::StrAppend(&out, ",", std::string(MarginAttributeName(m)));
  }
  out += ",count\n";
  for (size_t g = 0; g < table.geos().size(); ++g) {
    for (size_t t = 0; t < table.tuples_per_geo(); ++t) {
      absl::StrAppend(&out, table.geos()[g]);
      for (int level : table.DecodeTuple(t)) absl::StrAppend(&out, ",", level);
      const std::optional<int64_t>& c = table.cell(table.Index(g, t));
      absl::StrAppend(&out, ",", c ? absl::StrCat(*c) : "", "\n");
    }
  }
  return out;
}

Json ToJson(const MechanismSpec& spec) {
  Json j = {{"kind", std::string(MechanismKindName(spec.kind))},
            {"seed", spec.seed}};
  switch (spec.kind) {
    case MechanismKind::kGeometricNoise:
    case MechanismKind::kPerturbedTotal:
      j["alpha"] = ToJson(spec.alpha);
      j["sensitivity"] = spec.sensitivity;
      break;
    case MechanismKind::kSwap:
      j["swap_rate"] = ToJson(spec.swap_rate);
      j["swap_keys"] = AttributesJson(spec.swap_keys);
      break;
    case MechanismKind::kSuppress:
      j["threshold"] = spec.threshold;
      j["complementary"] = spec.complementary;
      break;
    case MechanismKind::kCoarsen:
      if (spec.coarse_bins) j["coarse_bins"] = ToJson(*spec.coarse_bins);
      break;
    case MechanismKind::kIdentity:
      break;
  }
  return j;
}

absl::StatusOr<MechanismSpec> MechanismSpecFromJson(const Json& j) {
  return Guard([&] { return ParseMechanism(j); });
}

Json ToJson(const ProductTarget& target) {
  if (const auto* t = std::get_if<TableSpec>(&target)) return {{"table", ToJson(*t)}};
  const auto& r = std::get<RecordListSpec>(target);
  return {{"records", {{"columns", AttributesJson(r.columns)}}}};
}

absl::StatusOr<ProductTarget> ProductTargetFromJson(const Json& j) {
  return Guard([&] { return ParseTarget(j); });
}

Json ToJson(const Epsilon& eps) {
  Json j = {{"nominal", ToJson(eps.nominal())},
            {"log_argument", ToJson(eps.log_argument())},
            {"value", eps.value()}};
  const std::optional<Rational> e = eps.ExpBound();
  j["exp"] = e ? ToJson(*e) : Json(nullptr);
  return j;
}

absl::StatusOr<Epsilon> EpsilonFromJson(const Json& j) {
  return Guard([&] {
    Epsilon e = Epsilon::Nominal(ParseR(Get<Json>(j, "nominal", "0")));
    return e + Epsilon::LogOf(ParseR(Get<Json>(j, "log_argument", "1")));
  });
}

Json ToJson(const Release& release) {
  Json targets = Json::array();
  for (const ProductTarget& t : release.targets) targets.push_back(ToJson(t));
  Json products = Json::array();
  for (const Product& p : release.products) {
    if (const auto* t = std::get_if<Table>(&p)) {
      products.push_back({{"table", ToJson(*t)}});
    } else {
      const auto& r = std::get<RecordList>(p);
      products.push_back(
          {{"records", {{"columns", AttributesJson(r.columns)}, {"rows", r.rows}}}});
    }
  }
  return {{"id", release.id},
          {"mechanism", ToJson(release.mechanism)},
          {"targets", targets},
          {"products", products},
          {"epsilon", release.epsilon ? ToJson(*release.epsilon) : Json(nullptr)}};
}

absl::StatusOr<Release> ReleaseFromJson(const Json& j, const Schema& schema) {
  return Guard([&] {
    Release r;
    r.id = Get<std::string>(j, "id", "");
    r.mechanism = ParseMechanism(Field(j, "mechanism"));
    for (const Json& t : Get<Json>(j, "targets", Json::array())) {
      r.targets.push_back(ParseTarget(t));
    }
    for (const Json& p : Field(j, "products")) {
      if (p.contains("table")) {
        r.products.push_back(ParseTable(p.at("table"), schema));
      } else {
        const Json& rec = Field(p, "records");
        RecordList list;
        list.columns = ParseAttributes(Field(rec, "columns"));
        list.rows = Get<std::vector<std::vector<int>>>(rec, "rows", {});
        r.products.push_back(std::move(list));
      }
    }
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) {
      r.epsilon = Value(EpsilonFromJson(j.at("epsilon")));
    }
    return r;
  });
}

Json ToJson(const Person& p) {
  return {{"id", p.id},           {"block", p.block}, {"sex", p.sex},
          {"age", p.age},         {"race", p.race},   {"ethnicity", p.ethnicity},
          {"sensitive", p.sensitive}, {"imputed", p.imputed}};
}

absl::StatusOr<Person> PersonFromJson(const Json& j) {
  return Guard([&] { return ParsePerson(j); });
}

Json ToJson(const AttackerModel& attacker) {
  Json universe = Json::array();
  for (const CandidatePerson& c : attacker.universe) {
    Json prior = Json::array();
    for (const PriorOption& o : c.prior) {
      prior.push_back({{"values", o.values}, {"weight", ToJson(o.weight)}});
    }
    universe.push_back({{"known", ToJson(c.known)},
                        {"unknown", AttributesJson(c.unknown)},
                        {"prior", prior},
                        {"inclusion", ToJson(c.inclusion)}});
  }
  return {{"name", attacker.name},
          {"schema", ToJson(attacker.schema)},
          {"geography", GeographyToJson(attacker.geography)},
          {"universe", universe},
          {"independent", attacker.independent}};
}

absl::StatusOr<AttackerModel> AttackerModelFromJson(const Json& j) {
  absl::StatusOr<AttackerModel> a = Guard([&] {
    AttackerModel a;
    a.name = Get<std::string>(j, "name", "");
    a.schema = ParseSchema(Get<Json>(j, "schema", "desk"));
    a.geography = ParseGeography(Get<Json>(j, "geography", Json::array()));
    for (const Json& c : Field(j, "universe")) {
      CandidatePerson p;
      p.known = ParsePerson(Field(c, "known"));
      p.unknown = ParseAttributes(Get<Json>(c, "unknown", Json::array()));
      for (const Json& o : Get<Json>(c, "prior", Json::array())) {
        p.prior.push_back({Field(o, "values").get<std::vector<int>>(),
                           ParseR(Field(o, "weight"))});
      }
      p.inclusion = ParseR(Get<Json>(c, "inclusion", 1));
      a.universe.push_back(std::move(p));
    }
    a.independent = Get<bool>(j, "independent", true);
    return a;
  });
  if (!a.ok()) return a.status();
  if (absl::Status st = ValidateAttacker(*a); !st.ok()) return st;
  return a;
}

Json ToJson(const WorldPosterior& post) {
  Json worlds = Json::array();
  for (size_t w = 0; w < post.support.size(); ++w) {
    Json persons = Json::array();
    for (const Person& p : post.support[w].data.persons()) {
      persons.push_back(ToJson(p));
    }
    worlds.push_back({{"probability", ToJson(post.probability[w])},
                      {"prior", ToJson(post.support[w].prior)},
                      {"option", post.support[w].option},
                      {"persons", persons}});
  }
  return {{"normalizer", ToJson(post.normalizer)}, {"worlds", worlds}};
}

Json ToJson(const RiskReport& r) {
  Json per_record = Json::array();
  for (const Rational& p : r.per_record) per_record.push_back(ToJson(p));
  return {
      {"methodology", std::string(MethodologyName(r.methodology))},
      {"target", r.target},
      {"value", r.value},
      {"not_applicable", r.not_applicable},
      {"prior", Optional(r.prior)},
      {"posterior", Optional(r.posterior)},
      {"posterior_actual", Optional(r.posterior_actual)},
      {"posterior_counterfactual", Optional(r.posterior_counterfactual)},
      {"difference", Optional(r.difference)},
      {"ratio", Optional(r.ratio)},
      {"ratio_unbounded", r.ratio_unbounded},
      {"per_record", per_record},
      {"convention", r.convention
                         ? Json(std::string(CfConventionName(*r.convention)))
                         : Json(nullptr)},
      {"mode", r.mode ? Json(std::string(CfModeName(*r.mode))) : Json(nullptr)},
      {"exp_epsilon", Optional(r.exp_epsilon)},
      {"note", r.note},
  };
}

std::string TradeoffCurveToCsv(const TradeoffCurve& curve) {
  std::string out = "alpha,power\n";
  for (const TradeoffPoint& p : curve.points) {
    absl::StrAppend(&out, FormatRational(p.alpha), ",", FormatRational(p.power),
                    "\n");
  }
  return out;
}

Json ToJson(const TradeoffCurve& curve) {
  Json points = Json::array();
  for (const TradeoffPoint& p : curve.points) {
    points.push_back({{"alpha", ToJson(p.alpha)}, {"power", ToJson(p.power)}});
  }
  return {{"points", points},
          {"epsilon_bound", Optional(curve.epsilon_bound)},
          {"within_bound", curve.within_bound}};
}

Json ToJson(const ConstraintSystem& system) {
  return {{"num_variables", system.num_variables},
          {"blocks", system.blocks},
          {"cells_per_block", system.cells_per_block},
          {"equations", EquationsJson(system.equations)},
          {"invariant_equations", EquationsJson(system.invariant_equations)}};
}

Json ToJson(const ReconstructionResult& result) {
  return {{"solution_count", result.solution_count},
          {"capped", result.capped},
          {"unique", result.unique()},
          {"solutions", result.solutions}};
}

Json ToJson(const MatchResult& result) {
  Json pairs = Json::array();
  for (const auto& [a, c] : result.assignments) {
    pairs.push_back({{"attacker", a}, {"confidential", c}});
  }
  return {{"assignments", pairs},
          {"attacker_size", result.attacker_size},
          {"match_count", result.match_count},
          {"confirmed_count", result.confirmed_count},
          {"rate", result.rate()}};
}

Json ToJson(std::span<const GroupRate> rates) {
  Json out = Json::array();
  for (const GroupRate& g : rates) {
    out.push_back({{"label", g.label},
                   {"persons", g.persons},
                   {"matched", g.matched},
                   {"confirmed", g.confirmed},
                   {"rate", g.rate}});
  }
  return out;
}

std::string RvrOutcomeToCsv(const RvrOutcome& outcome) {
  std::string out = "block,population,hits,misses\n";
  for (const RvrBlockRow& r : outcome.per_block) {
    absl::StrAppend(&out, r.block, ",", r.population, ",", r.hits, ",",
                    r.misses, "\n");
  }
  return out;
}

Json ToJson(const RvrOutcome& outcome) {
  Json rows = Json::array();
  for (const RvrBlockRow& r : outcome.per_block) {
    rows.push_back({{"block", r.block},
                    {"population", r.population},
                    {"hits", r.hits},
                    {"misses", r.misses}});
  }
  return {{"trials", outcome.trials},
          {"successes", outcome.successes},
          {"rate", outcome.rate},
          {"per_block", rows}};
}

Json ToJson(const DegenerateExhibit& e) {
  return {{"sex", e.sex},
          {"age", e.age},
          {"rvr_rate", ToJson(e.rvr_rate)},
          {"population_share", ToJson(e.population_share)},
          {"inflation", ToJson(e.inflation)},
          {"one_to_one_matches", e.one_to_one_matches},
          {"one_to_one_rate", ToJson(e.one_to_one_rate)}};
}

Json ToJson(const ModalReport& r) {
  Json predictions = Json::array();
  for (const std::optional<int>& p : r.predictions) {
    predictions.push_back(p ? Json(*p) : Json(nullptr));
  }
  return {{"predictions", predictions},
          {"predicted", r.predicted},
          {"correct", r.correct},
          {"accuracy", ToJson(r.accuracy)},
          {"nonmodal_predicted", r.nonmodal_predicted},
          {"nonmodal_precision", ToJson(r.nonmodal_precision)},
          {"by_block_size", GroupsJson(r.by_block_size)},
          {"by_homogeneity", GroupsJson(r.by_homogeneity)}};
}

Json ToJson(const LooReport& r) {
  return {{"all", SubgroupJson(r.all)},
          {"modal", SubgroupJson(r.modal)},
          {"nonmodal", SubgroupJson(r.nonmodal)}};
}

Json ToJson(const ScenarioVerdict& v) {
  Json per = Json::object();
  Json expected = Json::object();
  for (int c = 0; c < kColumns; ++c) {
    const std::string name(ColumnName(static_cast<Column>(c)));
    per[name] = std::string(VerdictName(v.verdicts[c]));
    expected[name] = std::string(VerdictName(v.expected[c]));
  }
  Json evidence = Json::array();
  for (const Evidence& e : v.evidence) {
    evidence.push_back({{"name", e.name},
                        {"value", e.value ? ToJson(*e.value) : Json("unbounded")}});
  }
  return {{"scenario", v.scenario},
          {"row", v.row},
          {"per_methodology", per},
          {"expected", expected},
          {"matches", v.Matches()},
          {"evidence", evidence},
          {"predicates", v.predicates},
          {"failed_checks", v.failed_checks}};
}

Json ToJson(std::span<const ScenarioVerdict> verdicts) {
  Json list = Json::array();
  bool all = true;
  for (const ScenarioVerdict& v : verdicts) {
    list.push_back(ToJson(v));
    all = all && v.Matches();
  }
  return {{"scenarios", list}, {"all_match", all}};
}

}  // namespace sdl
