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

#ifndef SDL_MECHANISMS_H_
#define SDL_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "sdl/rational.h"
#include "sdl/tabulate.h"
#include "sdl/world_model.h"

namespace sdl {

// Upper bound on enumerated configurations (mechanism realizations, output
// classes, candidate worlds). Past it results are Unavailable, never
// approximated.
inline constexpr size_t kEnumerationCap = 1'000'000;

enum class MechanismKind {
  kIdentity,
  kGeometricNoise,
  kSwap,
  kSuppress,
  kCoarsen,
  kPerturbedTotal,
};

std::string_view MechanismKindName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kIdentity;
  // GeometricNoise and PerturbedTotal: per-cell decay and declared L1
  // sensitivity of the whole release.
  Rational alpha = MakeRational(1, 2);
  int sensitivity = 1;
  // Swap: per-record selection probability and the attributes partners share.
  Rational swap_rate = MakeRational(0);
  std::vector<Attribute> swap_keys = {Attribute::kSex, Attribute::kAge};
  // Suppress: cells with 0 < count < threshold are withheld.
  int threshold = 0;
  bool complementary = false;
  // Coarsen: replacement age bins.
  std::optional<AgeBinSystem> coarse_bins;
  uint64_t seed = 0;
};

absl::Status ValidateMechanism(const MechanismSpec& spec);

// Released record layout. Rows carry only the listed columns, in order.
struct RecordListSpec {
  std::vector<Attribute> columns = {Attribute::kBlock, Attribute::kSex,
                                    Attribute::kAge, Attribute::kRace,
                                    Attribute::kEthnicity,
                                    Attribute::kSensitive};

  friend bool operator==(const RecordListSpec&,
                         const RecordListSpec&) = default;
};

using ProductTarget = std::variant<TableSpec, RecordListSpec>;

// A protected record list {r_1..r_n}. Rows are sorted, so the release order
// carries no information about which respondent produced which row.
struct RecordList {
  std::vector<Attribute> columns;
  std::vector<std::vector<int>> rows;

  friend bool operator==(const RecordList&, const RecordList&) = default;
};

using Product = std::variant<Table, RecordList>;

// Privacy loss kept exact as nominal + ln(log_argument). Geometric noise
// with decay a and sensitivity d contributes ln((1/a)^d); hand-entered
// budgets use the nominal part. Sums stay exact in both parts.
class Epsilon {
 public:
  static Epsilon Nominal(Rational value);
  static Epsilon LogOf(Rational argument);

  const Rational& nominal() const { return nominal_; }
  const Rational& log_argument() const { return log_argument_; }
  double value() const;
  // e^epsilon, exact when there is no nominal part.
  std::optional<Rational> ExpBound() const;

  Epsilon operator+(const Epsilon& other) const;
  friend bool operator==(const Epsilon& a, const Epsilon& b) {
    return a.nominal_ == b.nominal_ && a.log_argument_ == b.log_argument_;
  }

 private:
  Rational nominal_ = 0;
  Rational log_argument_ = 1;
};

struct Release {
  std::string id;
  MechanismSpec mechanism;
  std::vector<ProductTarget> targets;
  std::vector<Product> products;
  std::optional<Epsilon> epsilon;

  const RecordList* records() const;
  bool HasRecords() const { return records() != nullptr; }
};

// Targets for PerturbedTotal may be empty; the national total is implied.
absl::StatusOr<Release> Apply(const Dataset& data, const MechanismSpec& spec,
                              std::span<const ProductTarget> targets,
                              std::string id = "");

// Deterministic part of the mechanism applied to an already protected
// dataset: tabulation, suppression, coarsening, record extraction. No noise.
absl::StatusOr<std::vector<Product>> ProductsOf(
    const Dataset& protected_data, const MechanismSpec& spec,
    std::span<const ProductTarget> targets);

std::vector<int> RecordRow(const Person& person,
                           std::span<const Attribute> columns,
                           const MechanismSpec& spec);

struct Realization {
  Rational probability;
  Dataset data;
};

// Every internal random configuration of a finite-support mechanism with its
// probability. Deterministic kinds yield one realization; Swap yields one per
// selection subset. nullopt when the configuration space exceeds `cap`.
// Errors for noise kinds, whose support is infinite.
absl::StatusOr<std::optional<std::vector<Realization>>> Realizations(
    const Dataset& data, const MechanismSpec& spec,
    size_t cap = kEnumerationCap);

bool IsNoiseKind(MechanismKind kind);

// Exact P(release | candidate). nullopt means Unavailable (enumeration cap).
absl::StatusOr<std::optional<Rational>> Likelihood(const Release& release,
                                                   const Dataset& candidate);

// P(noise = k) = (1-a)/(1+a) * a^|k|.
Rational GeometricMass(const Rational& alpha, int64_t k);
// P(noise <= k).
Rational GeometricCdf(const Rational& alpha, int64_t k);

// A set of outputs whose members induce identical likelihood ratios between
// the candidate datasets passed to EnumerateOutputClasses. For noise kinds,
// each noisy cell is a point value, a whole tail beyond every candidate's
// true count, or kAny when every candidate shares the true count.
enum class CellClass { kPoint, kAtOrBelow, kAtOrAbove, kAny };

struct OutputClass {
  Release release;  // representative member
  std::vector<CellClass> cells;  // noise kinds only; flat over products
};

absl::StatusOr<std::vector<OutputClass>> EnumerateOutputClasses(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    std::span<const Dataset> candidates, size_t cap = kEnumerationCap);

// Noise kinds only: the class lattice over explicit noiseless cell vectors.
// `shape` supplies the product layout (any candidate's noiseless products).
absl::StatusOr<std::vector<OutputClass>> EnumerateNoiseClasses(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    const std::vector<Product>& shape,
    std::span<const std::vector<int64_t>> truths,
    size_t cap = kEnumerationCap);

// Total probability of the class under `data`. For kAny cells the class
// covers every value, so this is exact for any dataset; the representative's
// likelihood ratios are only meaningful among the enumerated candidates.
absl::StatusOr<Rational> ClassProbability(const OutputClass& output_class,
                                          const Dataset& data);

// A candidate dataset with its deterministic image under one mechanism and
// target list precomputed, so that many releases or output classes can be
// scored against it cheaply.
class PreparedCandidate {
 public:
  static absl::StatusOr<PreparedCandidate> Create(
      const MechanismSpec& spec, std::span<const ProductTarget> targets,
      const Dataset& data, size_t cap = kEnumerationCap);

  // nullopt means Unavailable.
  absl::StatusOr<std::optional<Rational>> Likelihood(
      const Release& release) const;
  absl::StatusOr<Rational> ClassProbability(
      const OutputClass& output_class) const;

  // Noise kinds: the noiseless cell counts, flat over products.
  std::span<const int64_t> cells() const { return cells_; }

  // Noise kinds: the same candidate with its noiseless cells moved by
  // `delta`, so that P(o | shifted) = P(o - delta | this).
  absl::StatusOr<PreparedCandidate> Shifted(
      std::span<const int64_t> delta) const;

 private:
  struct Outcome {
    std::string key;
    Rational probability;
  };
  MechanismSpec spec_;
  bool available_ = true;
  std::vector<Outcome> outcomes_;  // finite kinds, sorted by key
  std::vector<int64_t> cells_;
};

// Canonical byte key of a product list; equal keys iff equal products.
std::string ProductsKey(std::span<const Product> products);

struct RatioCheck {
  // sup over outputs of P(o | d1) / P(o | d2); nullopt means unbounded.
  std::optional<Rational> worst;
  // e^epsilon for noise kinds, 1 for mechanisms without a privacy parameter.
  Rational bound = 1;
  bool within = false;
};

absl::StatusOr<RatioCheck> DpRatioBoundCheck(
    const MechanismSpec& spec, std::span<const ProductTarget> targets,
    const Dataset& d1, const Dataset& d2);

// Same check for independent releases observed jointly; the bound is the
// product of the per-release bounds.
struct ReleasePlan {
  MechanismSpec mechanism;
  std::vector<ProductTarget> targets;
};
// (P(o | d1), P(o | d2)) for every joint output class of the plans.
absl::StatusOr<std::vector<std::pair<Rational, Rational>>>
JointClassProbabilities(std::span<const ReleasePlan> plans, const Dataset& d1,
                        const Dataset& d2);

// Product of the plans' e^epsilon, 1 for plans without epsilon; nullopt
// when some epsilon has a nominal part.
std::optional<Rational> ComposedExpBound(std::span<const ReleasePlan> plans);

absl::StatusOr<RatioCheck> ComposedRatioBoundCheck(
    std::span<const ReleasePlan> plans, const Dataset& d1, const Dataset& d2);

std::optional<Epsilon> EpsilonOf(const MechanismSpec& spec);

struct LedgerEntry {
  std::string release_id;
  Epsilon epsilon;
};

class CompositionLedger {
 public:
  std::span<const LedgerEntry> entries() const { return entries_; }
  const Epsilon& total() const { return total_; }

  // Errors when the release carries no epsilon.
  absl::StatusOr<CompositionLedger> Compose(const Release& release) const;
  CompositionLedger Record(std::string release_id, const Epsilon& eps) const;

 private:
  std::vector<LedgerEntry> entries_;
  Epsilon total_ = Epsilon::Nominal(0);
};

}  // namespace sdl

#endif  // SDL_MECHANISMS_H_
