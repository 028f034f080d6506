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

#ifndef SDL_SCENARIOS_H_
#define SDL_SCENARIOS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/rational.h"

namespace sdl {

// Methodology columns of the comparison table.
enum class Column { kAbsLink = 0, kAbs = 1, kPr2P = 2, kCf = 3 };
inline constexpr int kColumns = 4;

std::string_view ColumnName(Column c);

// kPass means the methodology has the property ("y"), kFail that it lacks
// it ("n"). kUnassessed marks cells that are deliberately left open ("?").
enum class Verdict { kPass, kFail, kNotApplicable, kUnassessed };

std::string_view VerdictName(Verdict v);    // pass, fail, ...
std::string_view VerdictSymbol(Verdict v);  // y, n, NA, ?
absl::StatusOr<Verdict> ParseVerdict(std::string_view name);

// One exact quantity behind a verdict. nullopt value means unbounded.
struct Evidence {
  std::string name;
  std::optional<Rational> value;
};

struct ScenarioVerdict {
  std::string scenario;  // short key, e.g. "uninformative"
  std::string row;       // table row label
  std::array<Verdict, kColumns> verdicts{};
  std::array<Verdict, kColumns> expected{};
  std::vector<Evidence> evidence;
  // The numeric predicate that turned each quantity into a verdict.
  std::vector<std::string> predicates;
  // Control checks that did not hold. Any entry makes the scenario fail.
  std::vector<std::string> failed_checks;

  Verdict verdict(Column c) const { return verdicts[static_cast<int>(c)]; }
  bool Matches() const { return verdicts == expected && failed_checks.empty(); }
  const Evidence* Find(std::string_view name) const;
};

// Decision thresholds shared by every scenario.
Rational AbsThreshold();       // posterior >= 1/2 is high risk
Rational Pr2PThreshold();      // |posterior - prior| > 1/10 is a change
Rational ContrastThreshold();  // max(r, 1/r) > 11/10 is a change

absl::StatusOr<ScenarioVerdict> ScenarioUninformative(uint64_t seed);
absl::StatusOr<ScenarioVerdict> ScenarioReconstructionTenclones(uint64_t seed,
                                                                int k = 4);
absl::StatusOr<ScenarioVerdict> ScenarioGeneralizableMontana(uint64_t seed);
absl::StatusOr<ScenarioVerdict> ScenarioComposition(uint64_t seed);
absl::StatusOr<ScenarioVerdict> ScenarioBrittleness(uint64_t seed);
absl::StatusOr<ScenarioVerdict> ScenarioMultipleAttackers(uint64_t seed);

// Every scenario, in table row order.
absl::StatusOr<std::vector<ScenarioVerdict>> RunAll(uint64_t seed);

bool AllMatch(const std::vector<ScenarioVerdict>& verdicts);

// Fixed-width text table with one line per scenario.
std::string RenderTable(const std::vector<ScenarioVerdict>& verdicts);

}  // namespace sdl

#endif  // SDL_SCENARIOS_H_
