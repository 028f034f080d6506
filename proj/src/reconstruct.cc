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

#include "sdl/reconstruct.h"

#include <algorithm>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"

namespace sdl {
namespace {

// Table margin value of a schema cell, or nullopt when the cell straddles a
// table bin boundary.
absl::StatusOr<int> CellMarginValue(const CellTuple& cell,
                                    MarginAttribute attribute,
                                    const TableSpec& spec,
                                    const Schema& schema) {
  switch (attribute) {
    case MarginAttribute::kSex:
      return cell.sex;
    case MarginAttribute::kRace:
      return cell.race;
    case MarginAttribute::kEthnicity:
      return cell.ethnicity;
    case MarginAttribute::kAgeBin: {
      const AgeBin& bin = schema.age_bins.bins()[cell.age_bin];
      const int lo = spec.age_bins.BinOfUnchecked(bin.lo);
      if (lo != spec.age_bins.BinOfUnchecked(bin.hi)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "table '", spec.name, "' age bins split a schema age bin"));
      }
      return lo;
    }
    case MarginAttribute::kSensitive:
      return absl::InvalidArgumentError(
          "sensitive margins are outside the reconstruction variables");
  }
  return absl::InternalError("unreachable");
}

class Solver {
 public:
  Solver(const ConstraintSystem& system, uint64_t cap)
      : cap_(cap), n_(system.num_variables) {
    for (const Equation& e : system.equations) equations_.push_back(&e);
    for (const Equation& e : system.invariant_equations) {
      equations_.push_back(&e);
    }
    member_.resize(n_);
    for (size_t e = 0; e < equations_.size(); ++e) {
      for (int v : equations_[e]->vars) member_[v].push_back(e);
    }
    residual_.resize(equations_.size());
    unassigned_.resize(equations_.size());
    for (size_t e = 0; e < equations_.size(); ++e) {
      residual_[e] = equations_[e]->rhs;
      unassigned_[e] = static_cast<int64_t>(equations_[e]->vars.size());
    }
    value_.assign(n_, -1);
  }

  bool Unconstrained() const {
    for (const auto& m : member_) {
      if (m.empty()) return true;
    }
    return false;
  }

  void Run(ReconstructionResult& result) {
    result_ = &result;
    Search(n_);
  }

 private:
  // Upper bound of an unassigned variable: the smallest residual among its
  // equations.
  int64_t Upper(size_t v) const {
    int64_t hi = std::numeric_limits<int64_t>::max();
    for (size_t e : member_[v]) hi = std::min(hi, residual_[e]);
    return hi;
  }

  // Feasible interval for v, or lo > hi when none.
  std::pair<int64_t, int64_t> Domain(size_t v,
                                     const std::vector<int64_t>& upper,
                                     const std::vector<int64_t>& slack) const {
    int64_t lo = 0;
    const int64_t hi = upper[v];
    for (size_t e : member_[v]) {
      // Others in e can absorb at most slack[e] - upper[v].
      lo = std::max(lo, residual_[e] - (slack[e] - upper[v]));
    }
    return {lo, hi};
  }

  void Search(size_t remaining) {
    if (result_->capped) return;
    if (remaining == 0) {
      for (int64_t r : residual_) {
        if (r != 0) return;
      }
      std::vector<int64_t> solution(value_.begin(), value_.end());
      ++result_->solution_count;
      result_->solutions.push_back(std::move(solution));
      if (result_->solution_count >= cap_) result_->capped = true;
      return;
    }
    std::vector<int64_t> upper(n_, 0);
    for (size_t v = 0; v < n_; ++v) {
      if (value_[v] < 0) upper[v] = Upper(v);
    }
    // slack[e]: the most the unassigned members of e can still sum to.
    std::vector<int64_t> slack(equations_.size(), 0);
    for (size_t e = 0; e < equations_.size(); ++e) {
      if (residual_[e] < 0) return;
      for (int v : equations_[e]->vars) {
        if (value_[v] < 0) slack[e] += upper[v];
      }
      if (slack[e] < residual_[e]) return;
      if (unassigned_[e] == 0 && residual_[e] != 0) return;
    }
    size_t best = n_;
    int64_t best_lo = 0;
    int64_t best_hi = -1;
    for (size_t v = 0; v < n_; ++v) {
      if (value_[v] >= 0) continue;
      auto [lo, hi] = Domain(v, upper, slack);
      if (lo > hi) return;
      if (best == n_ || hi - lo < best_hi - best_lo) {
        best = v;
        best_lo = lo;
        best_hi = hi;
        if (lo == hi) break;
      }
    }
    for (int64_t x = best_lo; x <= best_hi && !result_->capped; ++x) {
      Assign(best, x);
      Search(remaining - 1);
      Unassign(best);
    }
  }

  void Assign(size_t v, int64_t x) {
    value_[v] = x;
    for (size_t e : member_[v]) {
      residual_[e] -= x;
      --unassigned_[e];
    }
  }

  void Unassign(size_t v) {
    for (size_t e : member_[v]) {
      residual_[e] += value_[v];
      ++unassigned_[e];
    }
    value_[v] = -1;
  }

  uint64_t cap_;
  size_t n_;
  std::vector<const Equation*> equations_;
  std::vector<std::vector<size_t>> member_;
  std::vector<int64_t> residual_;
  std::vector<int64_t> unassigned_;
  std::vector<int64_t> value_;
  ReconstructionResult* result_ = nullptr;
};

}  // namespace

absl::Status ConstraintSystem::Validate() const {
  for (const auto* list : {&equations, &invariant_equations}) {
    for (const Equation& e : *list) {
      if (e.vars.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("equation '", e.label, "' has no variables"));
      }
      if (e.rhs < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("equation '", e.label, "' has a negative total"));
      }
      for (size_t i = 0; i < e.vars.size(); ++i) {
        if (e.vars[i] < 0 || static_cast<size_t>(e.vars[i]) >= num_variables ||
            (i > 0 && e.vars[i] <= e.vars[i - 1])) {
          return absl::InvalidArgumentError(absl::StrCat(
              "equation '", e.label, "' variables must be sorted, distinct "
              "and in range"));
        }
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ConstraintSystem> BuildConstraints(
    std::span<const Table> tables, const Schema& schema,
    const std::map<int, int>& geography,
    const std::map<int, BlockTotals>* invariants, int voting_age) {
  if (absl::Status st = schema.Validate(); !st.ok()) return st;
  ConstraintSystem system;
  for (const auto& [block, region] : geography) system.blocks.push_back(block);
  system.cells_per_block = static_cast<size_t>(schema.cells());
  system.num_variables = system.blocks.size() * system.cells_per_block;
  std::vector<CellTuple> cells;
  for (int c = 0; c < schema.cells(); ++c) cells.push_back(DecodeCell(c, schema));

  for (const Table& table : tables) {
    const TableSpec& spec = table.spec();
    if (!spec.age_bins.IsCoarseningOf(schema.age_bins)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "table '", spec.name, "' age bins do not coarsen the schema"));
    }
    // Tuple index of every schema cell in this table.
    std::vector<size_t> tuple_of(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      std::vector<int> levels;
      for (MarginAttribute a : spec.margin) {
        absl::StatusOr<int> v = CellMarginValue(cells[c], a, spec, schema);
        if (!v.ok()) return v.status();
        levels.push_back(*v);
      }
      tuple_of[c] = table.EncodeTuple(levels);
    }
    for (size_t g = 0; g < table.geos().size(); ++g) {
      const int geo = table.geos()[g];
      std::vector<size_t> block_indices;
      for (size_t b = 0; b < system.blocks.size(); ++b) {
        const int block = system.blocks[b];
        const bool in_geo =
            spec.geo_level == GeoLevel::kNational ||
            (spec.geo_level == GeoLevel::kBlock && block == geo) ||
            (spec.geo_level == GeoLevel::kRegion &&
             geography.at(block) == geo);
        if (in_geo) block_indices.push_back(b);
      }
      if (block_indices.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "table '", spec.name, "' covers geography ", geo,
            " which has no blocks"));
      }
      for (size_t t = 0; t < table.tuples_per_geo(); ++t) {
        const std::optional<int64_t>& count = table.cell(table.Index(g, t));
        if (!count) continue;
        Equation eq;
        eq.rhs = *count;
        eq.label = absl::StrCat(spec.name, "[", geo, "][", t, "]");
        for (size_t b : block_indices) {
          for (size_t c = 0; c < cells.size(); ++c) {
            if (tuple_of[c] == t) {
              eq.vars.push_back(
                  static_cast<int>(b * system.cells_per_block + c));
            }
          }
        }
        if (eq.vars.empty()) continue;
        std::sort(eq.vars.begin(), eq.vars.end());
        system.equations.push_back(std::move(eq));
      }
    }
  }

  if (invariants != nullptr) {
    if (!schema.age_bins.HasBoundaryAt(voting_age)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema age bins have no boundary at ", voting_age));
    }
    for (size_t b = 0; b < system.blocks.size(); ++b) {
      auto it = invariants->find(system.blocks[b]);
      if (it == invariants->end()) continue;
      Equation pop;
      Equation adults;
      pop.rhs = it->second.population;
      adults.rhs = it->second.voting_age;
      pop.label = absl::StrCat("population[", system.blocks[b], "]");
      adults.label = absl::StrCat("voting_age[", system.blocks[b], "]");
      for (size_t c = 0; c < cells.size(); ++c) {
        const int v = static_cast<int>(b * system.cells_per_block + c);
        pop.vars.push_back(v);
        if (schema.age_bins.bins()[cells[c].age_bin].lo >= voting_age) {
          adults.vars.push_back(v);
        }
      }
      system.invariant_equations.push_back(std::move(pop));
      if (!adults.vars.empty()) {
        system.invariant_equations.push_back(std::move(adults));
      }
    }
  }
  if (absl::Status st = system.Validate(); !st.ok()) return st;
  return system;
}

bool Satisfies(const ConstraintSystem& system,
               std::span<const int64_t> solution) {
  if (solution.size() != system.num_variables) return false;
  for (int64_t x : solution) {
    if (x < 0) return false;
  }
  for (const auto* list : {&system.equations, &system.invariant_equations}) {
    for (const Equation& e : *list) {
      int64_t sum = 0;
      for (int v : e.vars) sum += solution[v];
      if (sum != e.rhs) return false;
    }
  }
  return true;
}

absl::StatusOr<ReconstructionResult> SolveAll(const ConstraintSystem& system,
                                              uint64_t cap) {
  if (absl::Status st = system.Validate(); !st.ok()) return st;
  if (cap == 0) return absl::InvalidArgumentError("cap must be positive");
  Solver solver(system, cap);
  if (solver.Unconstrained()) {
    return absl::InvalidArgumentError(
        "some variable appears in no equation; its count is unbounded");
  }
  ReconstructionResult result;
  solver.Run(result);
  for (const std::vector<int64_t>& s : result.solutions) {
    if (!Satisfies(system, s)) {
      return absl::InternalError("solver emitted an infeasible solution");
    }
  }
  return result;
}

absl::StatusOr<Variability> VariabilityReport(
    const ConstraintSystem& system, const ReconstructionResult& result) {
  if (result.solutions.empty()) {
    return absl::FailedPreconditionError("no solutions to compare");
  }
  Variability v;
  v.min = result.solutions.front();
  v.max = result.solutions.front();
  for (const std::vector<int64_t>& s : result.solutions) {
    for (size_t i = 0; i < s.size(); ++i) {
      v.min[i] = std::min(v.min[i], s[i]);
      v.max[i] = std::max(v.max[i], s[i]);
    }
  }
  if (system.cells_per_block > 0) {
    for (size_t b = 0; b < system.blocks.size(); ++b) {
      bool pinned = true;
      for (size_t c = 0; c < system.cells_per_block; ++c) {
        const size_t i = b * system.cells_per_block + c;
        if (v.min[i] != v.max[i]) pinned = false;
      }
      v.zero_variability[system.blocks[b]] = pinned;
    }
  }
  return v;
}

absl::StatusOr<Dataset> MicrodataFromSolution(
    const ConstraintSystem& system, std::span<const int64_t> solution,
    const Schema& schema, const std::map<int, int>& geography) {
  if (system.cells_per_block != static_cast<size_t>(schema.cells()) ||
      solution.size() != system.num_variables) {
    return absl::InvalidArgumentError("solution does not fit the schema");
  }
  std::vector<Person> persons;
  int64_t id = 1;
  for (size_t v = 0; v < solution.size(); ++v) {
    const int block = system.blocks[v / system.cells_per_block];
    const CellTuple cell =
        DecodeCell(static_cast<int>(v % system.cells_per_block), schema);
    for (int64_t k = 0; k < solution[v]; ++k) {
      Person p;
      p.id = id++;
      p.block = block;
      p.sex = cell.sex;
      p.age = schema.age_bins.Representative(cell.age_bin);
      p.race = cell.race;
      p.ethnicity = cell.ethnicity;
      persons.push_back(p);
    }
  }
  return Dataset::Create(schema, std::move(persons), geography);
}

}  // namespace sdl
