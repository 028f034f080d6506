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

// sdl_lab: file-based front end for the disclosure-limitation lab.
//
//   sdl_lab generate --spec pop.json --seed 7 --out data.csv
//   sdl_lab protect --data data.csv --mechanism geom.json --table t.json
//   sdl_lab risk --attacker a.json --release r.json --target 1 --value 1
//       --method cf-bayes --data data.csv
//   sdl_lab scenario run-all --seed 42
//
// Exit status: 0 success, 1 data error or verdict mismatch, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "sdl/critiques.h"
#include "sdl/json_io.h"
#include "sdl/mechanisms.h"
#include "sdl/posterior.h"
#include "sdl/reconstruct.h"
#include "sdl/reident.h"
#include "sdl/risk.h"
#include "sdl/scenarios.h"
#include "sdl/status_macros.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {
namespace {

using Geography = std::map<int, int>;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Raised for argument combinations CLI11 cannot express.
struct UsageError {
  std::string message;
};

struct Options {
  std::string format = "json";
  std::string out;
  std::optional<uint64_t> seed;
  std::string schema = "desk";
  std::string geography;
  std::string data;
  // generate
  std::string spec;
  std::string geography_out;
  // tabulate, protect, reconstruct, critique both-zero
  std::vector<std::string> tables;
  std::vector<std::string> other_tables;
  std::string mechanism;
  std::vector<std::string> records;
  bool records_all = false;
  std::string id = "release";
  uint64_t cap = 10'000;
  std::string system_out;
  // reident
  std::string attacker;
  std::string age_mode = "exact";
  std::string bins = "mini_sf1";
  std::string group;
  bool data_defined_only = false;
  // risk
  std::vector<std::string> releases;
  int64_t target = 0;
  int value = 0;
  std::string method = "abs";
  std::string mode = "realized";
  std::string convention = "removal";
  // critique
  uint64_t trials = 100'000;
  std::string strategy = "constant";
  int sex = 1;
  int age = 50;
  int64_t a = 0;
  int64_t b = 0;
  size_t min_block = 0;
};

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::StatusOr<Json> ReadJson(const std::string& path) {
  SDL_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  absl::StatusOr<Json> j = ParseJson(text);
  if (!j.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", std::string(j.status().message())));
  }
  return j;
}

absl::Status WriteOutput(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) return absl::PermissionDeniedError(absl::StrCat("cannot write ", o.out));
  f << text;
  return absl::OkStatus();
}

// Every named input must exist before any work starts.
absl::Status ValidatePaths(const std::vector<std::string>& paths) {
  for (const std::string& p : paths) {
    if (!p.empty() && !std::filesystem::is_regular_file(p)) {
      return absl::NotFoundError(absl::StrCat("no such input file: ", p));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Schema> LoadSchema(const Options& o) {
  if (std::filesystem::is_regular_file(o.schema)) {
    SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(o.schema));
    return SchemaFromJson(j);
  }
  return SchemaPreset(o.schema);
}

absl::StatusOr<std::optional<Geography>> LoadGeography(
    const Options& o) {
  if (o.geography.empty()) return std::optional<Geography>();
  SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(o.geography));
  SDL_ASSIGN_OR_RETURN(Geography geo, GeographyFromJson(j));
  return std::optional<Geography>(std::move(geo));
}

absl::StatusOr<Dataset> LoadData(const Options& o, const Schema& schema) {
  if (o.data.empty()) throw UsageError{"--data is required"};
  SDL_ASSIGN_OR_RETURN(const std::string text, ReadFile(o.data));
  SDL_ASSIGN_OR_RETURN(const std::optional<Geography> geo,
                       LoadGeography(o));
  return ReadMicrodataCsv(text, schema, geo);
}

absl::StatusOr<std::vector<Table>> LoadTables(
    const std::vector<std::string>& paths, const Schema& schema) {
  std::vector<Table> out;
  for (const std::string& p : paths) {
    SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(p));
    SDL_ASSIGN_OR_RETURN(Table t, TableFromJson(j, schema));
    out.push_back(std::move(t));
  }
  return out;
}

void EchoConfig(const std::string& command, const Options& o) {
  Json c = {{"command", command}, {"format", o.format}, {"schema", o.schema}};
  if (o.seed) c["seed"] = *o.seed;
  if (!o.out.empty()) c["out"] = o.out;
  if (!o.data.empty()) c["data"] = o.data;
  if (!o.geography.empty()) c["geography"] = o.geography;
  if (!o.spec.empty()) c["spec"] = o.spec;
  if (!o.mechanism.empty()) c["mechanism"] = o.mechanism;
  if (!o.tables.empty()) c["tables"] = o.tables;
  if (!o.attacker.empty()) c["attacker"] = o.attacker;
  if (!o.releases.empty()) c["releases"] = o.releases;
  if (command == "risk") {
    c["method"] = o.method;
    c["target"] = o.target;
    c["value"] = o.value;
    c["mode"] = o.mode;
    c["convention"] = o.convention;
  }
  if (command == "reident") c["age_mode"] = o.age_mode;
  std::cerr << "sdl_lab config " << c.dump() << "\n";
}

void RequireFormat(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  throw UsageError{absl::StrCat("--format ", o.format,
                                " is not available for this command")};
}

uint64_t RequireSeed(const Options& o) {
  if (!o.seed) throw UsageError{"--seed is required for this command"};
  return *o.seed;
}

absl::Status Generate(const Options& o) {
  RequireFormat(o, {"csv", "json"});
  const uint64_t seed = RequireSeed(o);
  SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(o.spec));
  SDL_ASSIGN_OR_RETURN(PopulationSpec spec, PopulationSpecFromJson(j));
  spec.seed = seed;
  SDL_ASSIGN_OR_RETURN(const Dataset data, Generate(spec));
  if (!o.geography_out.empty()) {
    std::ofstream g(o.geography_out, std::ios::binary);
    if (!g) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot write ", o.geography_out));
    }
    g << DumpJson(GeographyToJson(data.geography()));
  }
  return WriteOutput(o, WriteMicrodataCsv(data));
}

absl::Status Tabulate(const Options& o) {
  RequireFormat(o, {"csv", "json"});
  if (o.tables.empty()) throw UsageError{"--table is required"};
  SDL_ASSIGN_OR_RETURN(const Schema schema, LoadSchema(o));
  SDL_ASSIGN_OR_RETURN(const Dataset data, LoadData(o, schema));
  Json list = Json::array();
  std::string csv;
  for (const std::string& path : o.tables) {
    SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(path));
    SDL_ASSIGN_OR_RETURN(const TableSpec spec, TableSpecFromJson(j));
    SDL_ASSIGN_OR_RETURN(const Table t, Tabulate(data, spec));
    list.push_back(ToJson(t));
    csv += TableToCsv(t);
  }
  if (o.format == "csv") return WriteOutput(o, csv);
  return WriteOutput(o, DumpJson(list.size() == 1 ? list[0] : list));
}

absl::Status Protect(const Options& o) {
  RequireFormat(o, {"json"});
  SDL_ASSIGN_OR_RETURN(const Schema schema, LoadSchema(o));
  SDL_ASSIGN_OR_RETURN(const Dataset data, LoadData(o, schema));
  if (o.mechanism.empty()) throw UsageError{"--mechanism is required"};
  SDL_ASSIGN_OR_RETURN(const Json mj, ReadJson(o.mechanism));
  SDL_ASSIGN_OR_RETURN(MechanismSpec spec, MechanismSpecFromJson(mj));
  const bool stochastic =
      IsNoiseKind(spec.kind) || spec.kind == MechanismKind::kSwap;
  if (o.seed) {
    spec.seed = *o.seed;
  } else if (stochastic && !mj.contains("seed")) {
    throw UsageError{"a randomized mechanism needs --seed or a seed field"};
  }
  std::vector<ProductTarget> targets;
  for (const std::string& path : o.tables) {
    SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(path));
    SDL_ASSIGN_OR_RETURN(TableSpec t, TableSpecFromJson(j));
    targets.push_back(std::move(t));
  }
  if (o.records_all || !o.records.empty()) {
    RecordListSpec r;
    if (!o.records.empty()) {
      r.columns.clear();
      for (const std::string& c : o.records) {
        SDL_ASSIGN_OR_RETURN(const Attribute a, ParseAttribute(c));
        r.columns.push_back(a);
      }
    }
    targets.push_back(r);
  }
  SDL_ASSIGN_OR_RETURN(const Release release, Apply(data, spec, targets, o.id));
  return WriteOutput(o, DumpJson(ToJson(release)));
}

absl::Status Reconstruct(const Options& o) {
  RequireFormat(o, {"csv", "json"});
  if (o.tables.empty()) throw UsageError{"--table is required"};
  SDL_ASSIGN_OR_RETURN(const Schema schema, LoadSchema(o));
  SDL_ASSIGN_OR_RETURN(const std::vector<Table> tables, LoadTables(o.tables, schema));
  SDL_ASSIGN_OR_RETURN(const std::optional<Geography> geo,
                       LoadGeography(o));
  std::map<int, int> geography;
  if (geo) {
    geography = *geo;
  } else {
    for (const Table& t : tables) {
      if (t.spec().geo_level != GeoLevel::kBlock) continue;
      for (int g : t.geos()) geography.emplace(g, 0);
    }
  }
  SDL_ASSIGN_OR_RETURN(const ConstraintSystem system,
                       BuildConstraints(tables, schema, geography));
  if (!o.system_out.empty()) {
    std::ofstream f(o.system_out, std::ios::binary);
    if (!f) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot write ", o.system_out));
    }
    f << DumpJson(ToJson(system));
  }
  SDL_ASSIGN_OR_RETURN(const ReconstructionResult result, SolveAll(system, o.cap));
  if (o.format == "csv") {
    std::string csv = "solution,variable,count\n";
    for (size_t s = 0; s < result.solutions.size(); ++s) {
      for (size_t v = 0; v < result.solutions[s].size(); ++v) {
        absl::StrAppend(&csv, s, ",", v, ",", result.solutions[s][v], "\n");
      }
    }
    return WriteOutput(o, csv);
  }
  return WriteOutput(o, DumpJson(ToJson(result)));
}

absl::Status Reident(const Options& o) {
  RequireFormat(o, {"csv", "json"});
  if (o.attacker.empty()) throw UsageError{"--attacker is required"};
  SDL_ASSIGN_OR_RETURN(const Schema schema, LoadSchema(o));
  SDL_ASSIGN_OR_RETURN(const Dataset data, LoadData(o, schema));
  SDL_ASSIGN_OR_RETURN(const std::string text, ReadFile(o.attacker));
  SDL_ASSIGN_OR_RETURN(const std::vector<Person> attacker, ReadAttackerCsv(text));
  KeySpec key;
  if (o.age_mode == "exact") {
    key.age_mode = AgeMode::kExact;
  } else if (o.age_mode == "pm1") {
    key.age_mode = AgeMode::kPlusMinusOne;
  } else {
    key.age_mode = AgeMode::kBinned;
    SDL_ASSIGN_OR_RETURN(AgeBinSystem bins, AgeBinPreset(o.bins));
    key.bins = std::move(bins);
  }
  SDL_ASSIGN_OR_RETURN(const MatchResult result,
                       MatchOneToOne(attacker, data, key, o.data_defined_only));
  if (o.format == "csv") {
    std::string csv = "attacker_id,confidential_id\n";
    for (const auto& [a, c] : result.assignments) absl::StrAppend(&csv, a, ",", c, "\n");
    return WriteOutput(o, csv);
  }
  Json j = ToJson(result);
  if (!o.group.empty()) {
    const Grouping g =
        o.group == "homogeneity" ? Grouping::kHomogeneity : Grouping::kBlockSize;
    const std::vector<GroupRate> rates =
        GroupRates(result, attacker, data, g, o.data_defined_only);
    j["groups"] = ToJson(rates);
  }
  return WriteOutput(o, DumpJson(j));
}

absl::Status Risk(const Options& o) {
  if (o.attacker.empty()) throw UsageError{"--attacker is required"};
  if (o.releases.empty()) throw UsageError{"--release is required"};
  SDL_ASSIGN_OR_RETURN(const Json aj, ReadJson(o.attacker));
  SDL_ASSIGN_OR_RETURN(const AttackerModel attacker, AttackerModelFromJson(aj));
  std::vector<Release> releases;
  std::vector<ReleasePlan> plans;
  for (const std::string& path : o.releases) {
    SDL_ASSIGN_OR_RETURN(const Json j, ReadJson(path));
    SDL_ASSIGN_OR_RETURN(Release r, ReleaseFromJson(j, attacker.schema));
    plans.push_back({r.mechanism, r.targets});
    releases.push_back(std::move(r));
  }
  RiskReport report;
  if (o.method == "abslink") {
    SDL_ASSIGN_OR_RETURN(report, AbsRiskWithLinking(attacker, releases, o.target, o.value));
  } else if (o.method == "abs") {
    SDL_ASSIGN_OR_RETURN(report,
                         AbsRiskWithoutLinking(attacker, releases, o.target, o.value));
  } else if (o.method == "pr2p-diff" || o.method == "pr2p-ratio") {
    SDL_ASSIGN_OR_RETURN(
        report, PriorToPosterior(attacker, releases, o.target, o.value,
                                 o.method == "pr2p-diff" ? Methodology::kPr2PDiff
                                                         : Methodology::kPr2PRatio));
  } else {
    // Counterfactual methods rerun the documented mechanisms on the data
    // and on its neighbor with the seeds recorded in the releases.
    SDL_ASSIGN_OR_RETURN(const Dataset data, LoadData(o, attacker.schema));
    SDL_ASSIGN_OR_RETURN(const CfConvention convention,
                         ParseCfConvention(o.convention));
    if (o.method == "cf-freq") {
      RequireFormat(o, {"csv", "json"});
      const Person* p = data.Find(o.target);
      if (p == nullptr) {
        return absl::NotFoundError(
            absl::StrCat("person ", o.target, " is not in the data"));
      }
      SDL_ASSIGN_OR_RETURN(const Dataset neighbor,
                           convention == CfConvention::kRemoval
                               ? data.Without(o.target)
                               : data.Replacing(BlankRecordFor(*p)));
      SDL_ASSIGN_OR_RETURN(const TradeoffCurve curve,
                           CounterfactualFreq(plans, data, neighbor));
      if (o.format == "csv") return WriteOutput(o, TradeoffCurveToCsv(curve));
      return WriteOutput(o, DumpJson(ToJson(curve)));
    }
    if (o.mode == "realized") {
      SDL_ASSIGN_OR_RETURN(report,
                           CounterfactualBayesFromData(attacker, data, plans, o.target,
                                                       o.value, convention));
    } else {
      SDL_ASSIGN_OR_RETURN(
          report, CounterfactualBayesOverOutputs(
                      attacker, data, plans, o.target, o.value, convention,
                      o.mode == "average" ? CfMode::kAverage : CfMode::kWorst));
    }
  }
  RequireFormat(o, {"json"});
  return WriteOutput(o, DumpJson(ToJson(report)));
}

absl::StatusOr<bool> Scenario(const Options& o) {
  RequireFormat(o, {"csv", "json"});
  const uint64_t seed = RequireSeed(o);
  SDL_ASSIGN_OR_RETURN(const std::vector<ScenarioVerdict> verdicts, RunAll(seed));
  std::cerr << RenderTable(verdicts);
  if (o.format == "csv") {
    std::string csv = "scenario,row,AbsLink,Abs,Pr2P,Cf,matches\n";
    for (const ScenarioVerdict& v : verdicts) {
      absl::StrAppend(&csv, v.scenario, ",", v.row);
      for (Verdict x : v.verdicts) absl::StrAppend(&csv, ",", std::string(VerdictSymbol(x)));
      absl::StrAppend(&csv, ",", v.Matches() ? "true" : "false", "\n");
    }
    SDL_RETURN_IF_ERROR(WriteOutput(o, csv));
  } else {
    SDL_RETURN_IF_ERROR(WriteOutput(o, DumpJson(ToJson(std::span(verdicts)))));
  }
  return AllMatch(verdicts);
}

absl::Status Critique(const std::string& which, const Options& o) {
  if (which == "arc" || which == "naive") {
    RequireFormat(o, {"json"});
    SDL_ASSIGN_OR_RETURN(const std::optional<Rational> pct,
                         which == "arc" ? ArcPctChange(o.a, o.b)
                                        : NaivePctChange(o.a, o.b));
    Json j = {{"a", o.a}, {"b", o.b}};
    if (pct) {
      j["pct_change"] = ToJson(*pct);
    } else {
      j["pct_change"] = nullptr;
      j["note"] = which == "arc" ? "no change" : "undefined";
    }
    return WriteOutput(o, DumpJson(j));
  }
  SDL_ASSIGN_OR_RETURN(const Schema schema, LoadSchema(o));
  if (which == "both-zero") {
    RequireFormat(o, {"json"});
    SDL_ASSIGN_OR_RETURN(const std::vector<Table> left, LoadTables(o.tables, schema));
    SDL_ASSIGN_OR_RETURN(const std::vector<Table> right,
                         LoadTables(o.other_tables, schema));
    SDL_ASSIGN_OR_RETURN(const Rational f, BothZeroFraction(left, right));
    return WriteOutput(o, DumpJson({{"both_zero_fraction", ToJson(f)}}));
  }
  SDL_ASSIGN_OR_RETURN(const Dataset data, LoadData(o, schema));
  if (which == "rvr") {
    RequireFormat(o, {"csv", "json"});
    GuessStrategy s;
    s.sex = o.sex;
    s.age = o.age;
    if (o.strategy == "proportional") {
      s.kind = GuessStrategy::Kind::kProportionalToPopulation;
    } else if (o.strategy == "uniform") {
      s.kind = GuessStrategy::Kind::kUniformOverCombos;
    }
    SDL_ASSIGN_OR_RETURN(const RvrOutcome outcome,
                         RvrSimulate(data, s, o.trials, RequireSeed(o)));
    if (o.format == "csv") return WriteOutput(o, RvrOutcomeToCsv(outcome));
    return WriteOutput(o, DumpJson(ToJson(outcome)));
  }
  RequireFormat(o, {"json"});
  if (which == "degenerate") {
    SDL_ASSIGN_OR_RETURN(const DegenerateExhibit e, RvrDegenerateExhibit(data));
    return WriteOutput(o, DumpJson(ToJson(e)));
  }
  if (which == "modal") {
    return WriteOutput(
        o, DumpJson(ToJson(ModalBaseline(data, o.min_block ? o.min_block : 5))));
  }
  return WriteOutput(
      o, DumpJson(ToJson(LooGap(data, o.min_block ? o.min_block : 1))));
}

void AddCommon(CLI::App* c, Options& o) {
  c->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c->add_option("--out", o.out, "Output path (default stdout)");
}

void AddData(CLI::App* c, Options& o) {
  c->add_option("--data", o.data, "Microdata CSV");
  c->add_option("--schema", o.schema, "Schema preset or schema JSON");
  c->add_option("--geography", o.geography, "Block to region map JSON");
}

int Main(int argc, char** argv) {
  CLI::App app{"Statistical disclosure limitation lab"};
  app.require_subcommand(1);
  Options o;
  std::string command;
  std::string critique;

  CLI::App* gen = app.add_subcommand("generate", "Synthesize microdata");
  AddCommon(gen, o);
  gen->add_option("--spec", o.spec, "PopulationSpec JSON")->required();
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--geography-out", o.geography_out, "Write the geography");

  CLI::App* tab = app.add_subcommand("tabulate", "Tabulate microdata");
  AddCommon(tab, o);
  AddData(tab, o);
  tab->add_option("--table", o.tables, "TableSpec JSON (repeatable)");

  CLI::App* prot = app.add_subcommand("protect", "Apply a mechanism");
  AddCommon(prot, o);
  AddData(prot, o);
  prot->add_option("--mechanism", o.mechanism, "MechanismSpec JSON");
  prot->add_option("--table", o.tables, "TableSpec JSON (repeatable)");
  prot->add_option("--record-columns", o.records, "Release records with these columns");
  prot->add_flag("--records", o.records_all, "Release records with every column");
  prot->add_option("--seed", o.seed, "Seed (overrides the mechanism's)");
  prot->add_option("--id", o.id, "Release id");

  CLI::App* rec = app.add_subcommand("reconstruct", "Enumerate reconstructions");
  AddCommon(rec, o);
  rec->add_option("--table", o.tables, "Table JSON (repeatable)");
  rec->add_option("--schema", o.schema, "Schema preset or schema JSON");
  rec->add_option("--geography", o.geography, "Block to region map JSON");
  rec->add_option("--cap", o.cap, "Solution cap");
  rec->add_option("--system-out", o.system_out, "Write the constraint system");

  CLI::App* rid = app.add_subcommand("reident", "One-to-one record matching");
  AddCommon(rid, o);
  AddData(rid, o);
  rid->add_option("--attacker", o.attacker, "Attacker CSV");
  rid->add_option("--age-mode", o.age_mode, "Age comparison")
      ->check(CLI::IsMember({"exact", "pm1", "binned"}));
  rid->add_option("--bins", o.bins, "Age bin preset for binned matching");
  rid->add_option("--group", o.group, "Group rates")
      ->check(CLI::IsMember({"block_size", "homogeneity"}));
  rid->add_flag("--data-defined-only", o.data_defined_only,
                "Confirm only data-defined records");

  CLI::App* risk = app.add_subcommand("risk", "Assess disclosure risk");
  AddCommon(risk, o);
  AddData(risk, o);
  risk->add_option("--attacker", o.attacker, "AttackerModel JSON");
  risk->add_option("--release", o.releases, "Release JSON (repeatable)");
  risk->add_option("--target", o.target, "Target person id")->required();
  risk->add_option("--value", o.value, "Sensitive value")->required();
  risk->add_option("--method", o.method, "Methodology")
      ->check(CLI::IsMember(
          {"abslink", "abs", "pr2p-diff", "pr2p-ratio", "cf-bayes", "cf-freq"}));
  risk->add_option("--mode", o.mode, "Counterfactual mode")
      ->check(CLI::IsMember({"realized", "average", "worst"}));
  risk->add_option("--convention", o.convention, "Neighbor convention")
      ->check(CLI::IsMember({"removal", "blank"}));

  CLI::App* scen = app.add_subcommand("scenario", "Desiderata scenarios");
  CLI::App* run_all = scen->add_subcommand("run-all", "Run every scenario");
  scen->require_subcommand(1);
  AddCommon(run_all, o);
  run_all->add_option("--seed", o.seed, "Seed");

  CLI::App* crit = app.add_subcommand("critique", "Critique exhibits and metrics");
  AddCommon(crit, o);
  AddData(crit, o);
  crit->add_option("kind", critique, "Exhibit")
      ->required()
      ->check(CLI::IsMember(
          {"rvr", "degenerate", "arc", "naive", "both-zero", "modal", "loo"}));
  crit->add_option("--seed", o.seed, "Seed");
  crit->add_option("--trials", o.trials, "Simulation trials");
  crit->add_option("--strategy", o.strategy, "Guess strategy")
      ->check(CLI::IsMember({"constant", "proportional", "uniform"}));
  crit->add_option("--sex", o.sex, "Constant guess sex");
  crit->add_option("--age", o.age, "Constant guess age");
  crit->add_option("--a", o.a, "Base count");
  crit->add_option("--b", o.b, "New count");
  crit->add_option("--table", o.tables, "Left table JSON (repeatable)");
  crit->add_option("--other-table", o.other_tables, "Right table JSON (repeatable)");
  crit->add_option("--min-block", o.min_block, "Minimum block size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) command = sub->get_name();
  if (command == "scenario") command = "scenario run-all";
  EchoConfig(command, o);

  try {
    absl::Status st = ValidatePaths({o.data, o.geography, o.spec, o.mechanism,
                                     o.attacker});
    for (const auto* list : {&o.tables, &o.other_tables, &o.releases}) {
      if (st.ok()) st = ValidatePaths(*list);
    }
    if (st.ok()) {
      if (command == "generate") {
        st = Generate(o);
      } else if (command == "tabulate") {
        st = Tabulate(o);
      } else if (command == "protect") {
        st = Protect(o);
      } else if (command == "reconstruct") {
        st = Reconstruct(o);
      } else if (command == "reident") {
        st = Reident(o);
      } else if (command == "risk") {
        st = Risk(o);
      } else if (command == "critique") {
        st = Critique(critique, o);
      } else {
        absl::StatusOr<bool> matched = Scenario(o);
        if (!matched.ok()) {
          st = matched.status();
        } else if (!*matched) {
          std::cerr << "sdl_lab: scenario verdicts do not match the table\n";
          return kExitData;
        }
      }
    }
    if (!st.ok()) {
      std::cerr << "sdl_lab: " << st << "\n";
      return kExitData;
    }
  } catch (const UsageError& e) {
    std::cerr << "sdl_lab: " << e.message << "\n" << app.help();
    return kExitUsage;
  }
  return 0;
}

}  // namespace
}  // namespace sdl

int main(int argc, char** argv) { return sdl::Main(argc, argv); }
