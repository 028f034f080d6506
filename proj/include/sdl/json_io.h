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

#ifndef SDL_JSON_IO_H_
#define SDL_JSON_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
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

// JSON forms of every exchanged type. Rationals travel as "p/q" strings so
// nothing is rounded; keys are emitted in sorted order, which keeps output
// byte-stable.
namespace sdl {

using Json = nlohmann::json;

absl::StatusOr<Json> ParseJson(std::string_view text);
// Two-space indented with a trailing newline.
std::string DumpJson(const Json& j);

Json ToJson(const Rational& r);
absl::StatusOr<Rational> RationalFromJson(const Json& j);

Json ToJson(const AgeBinSystem& bins);
absl::StatusOr<AgeBinSystem> AgeBinsFromJson(const Json& j);

// Presets serialize by name; a string parses as a preset.
Json ToJson(const Schema& schema);
absl::StatusOr<Schema> SchemaFromJson(const Json& j);

Json ToJson(const PopulationSpec& spec);
absl::StatusOr<PopulationSpec> PopulationSpecFromJson(const Json& j);

// [{"block": b, "region": r}, ...]
Json GeographyToJson(const std::map<int, int>& geography);
absl::StatusOr<std::map<int, int>> GeographyFromJson(const Json& j);

Json ToJson(const TableSpec& spec);
absl::StatusOr<TableSpec> TableSpecFromJson(const Json& j);

// {spec, cells: [{geo, margin, count}]}; a suppressed count is null.
Json ToJson(const Table& table);
absl::StatusOr<Table> TableFromJson(const Json& j, const Schema& schema);
// geo,<margin names...>,count with an empty count for suppressed cells.
std::string TableToCsv(const Table& table);

Json ToJson(const MechanismSpec& spec);
absl::StatusOr<MechanismSpec> MechanismSpecFromJson(const Json& j);

Json ToJson(const ProductTarget& target);
absl::StatusOr<ProductTarget> ProductTargetFromJson(const Json& j);

Json ToJson(const Epsilon& eps);
absl::StatusOr<Epsilon> EpsilonFromJson(const Json& j);

Json ToJson(const Release& release);
absl::StatusOr<Release> ReleaseFromJson(const Json& j, const Schema& schema);

Json ToJson(const Person& person);
absl::StatusOr<Person> PersonFromJson(const Json& j);

Json ToJson(const AttackerModel& attacker);
absl::StatusOr<AttackerModel> AttackerModelFromJson(const Json& j);

Json ToJson(const WorldPosterior& post);

Json ToJson(const RiskReport& report);
// alpha,power
std::string TradeoffCurveToCsv(const TradeoffCurve& curve);
Json ToJson(const TradeoffCurve& curve);

Json ToJson(const ConstraintSystem& system);
Json ToJson(const ReconstructionResult& result);

Json ToJson(const MatchResult& result);
Json ToJson(std::span<const GroupRate> rates);

// block,population,hits,misses
std::string RvrOutcomeToCsv(const RvrOutcome& outcome);
Json ToJson(const RvrOutcome& outcome);
Json ToJson(const DegenerateExhibit& exhibit);
Json ToJson(const ModalReport& report);
Json ToJson(const LooReport& report);

Json ToJson(const ScenarioVerdict& verdict);
Json ToJson(std::span<const ScenarioVerdict> verdicts);

}  // namespace sdl

#endif  // SDL_JSON_IO_H_
