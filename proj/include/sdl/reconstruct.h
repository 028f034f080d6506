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

#ifndef SDL_RECONSTRUCT_H_
#define SDL_RECONSTRUCT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {

// sum of variables[vars] == rhs, all coefficients 1.
struct Equation {
  std::vector<int> vars;  // sorted, distinct
  int64_t rhs = 0;
  std::string label;
};

// Nonnegative integer counts per (block, schema cell). When built from
// tables, variable v stands for block blocks[v / cells_per_block] and cell
// v % cells_per_block; hand-built systems may leave the layout empty.
struct ConstraintSystem {
  size_t num_variables = 0;
  std::vector<Equation> equations;
  std::vector<Equation> invariant_equations;
  std::vector<int> blocks;
  size_t cells_per_block = 0;

  absl::Status Validate() const;
};

// Suppressed cells contribute no equation. Table age bins must coarsen the
// schema's bins. `invariants` adds per-block population and voting-age
// equations (voting age needs a schema bin boundary at `voting_age`).
absl::StatusOr<ConstraintSystem> BuildConstraints(
    std::span<const Table> tables, const Schema& schema,
    const std::map<int, int>& geography,
    const std::map<int, BlockTotals>* invariants = nullptr,
    int voting_age = 18);

struct ReconstructionResult {
  std::vector<std::vector<int64_t>> solutions;  // in discovery order
  // Exact when !capped, otherwise a lower bound.
  uint64_t solution_count = 0;
  bool capped = false;
  bool unique() const { return !capped && solution_count == 1; }
};

// Exhaustive backtracking with interval propagation. Branches on the
// variable with the fewest feasible values (lowest index on ties) and tries
// values in ascending order. Every emitted solution is re-verified. Errors
// when some variable appears in no equation, since its domain is unbounded.
absl::StatusOr<ReconstructionResult> SolveAll(const ConstraintSystem& system,
                                              uint64_t cap = 10'000);

bool Satisfies(const ConstraintSystem& system,
               std::span<const int64_t> solution);

struct Variability {
  std::vector<int64_t> min;
  std::vector<int64_t> max;
  // Per block: every variable of the block is pinned across solutions.
  std::map<int, bool> zero_variability;
};

absl::StatusOr<Variability> VariabilityReport(
    const ConstraintSystem& system, const ReconstructionResult& result);

// One record per counted unit, ids 1..n, ages at the lower bound of their
// bin, sensitive 0.
absl::StatusOr<Dataset> MicrodataFromSolution(
    const ConstraintSystem& system, std::span<const int64_t> solution,
    const Schema& schema, const std::map<int, int>& geography);

}  // namespace sdl

#endif  // SDL_RECONSTRUCT_H_
