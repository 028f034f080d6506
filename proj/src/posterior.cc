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

#include "sdl/posterior.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"

namespace sdl {
namespace {

struct Choice {
  int option;  // -1: absent
  Rational weight;
};

std::vector<PriorOption> OptionsOf(const CandidatePerson& c) {
  if (c.unknown.empty() || c.prior.empty()) return {{{}, Rational(1)}};
  return c.prior;
}

std::map<int, int> GeographyOf(const AttackerModel& attacker) {
  if (!attacker.geography.empty()) return attacker.geography;
  std::map<int, int> geo;
  for (const CandidatePerson& c : attacker.universe) geo[c.known.block] = 0;
  return geo;
}

}  // namespace

absl::Status ValidateAttacker(const AttackerModel& attacker) {
  if (absl::Status st = attacker.schema.Validate(); !st.ok()) return st;
  if (!attacker.independent) {
    return absl::UnimplementedError(
        "only priors independent across persons are supported");
  }
  std::set<int64_t> ids;
  const std::map<int, int> geo = GeographyOf(attacker);
  for (const CandidatePerson& c : attacker.universe) {
    if (!ids.insert(c.known.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate candidate id ", c.known.id));
    }
    if (c.inclusion < 0 || c.inclusion > 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("candidate ", c.known.id, ": inclusion outside [0, 1]"));
    }
    if (c.unknown.empty() != c.prior.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "candidate ", c.known.id,
          ": unknown attributes and prior options must come together"));
    }
    std::set<Attribute> seen;
    for (Attribute a : c.unknown) {
      if (a == Attribute::kBlock) {
        return absl::InvalidArgumentError(absl::StrCat(
            "candidate ", c.known.id, ": block must be known"));
      }
      if (!seen.insert(a).second) {
        return absl::InvalidArgumentError(absl::StrCat(
            "candidate ", c.known.id, ": repeated unknown attribute"));
      }
    }
    Rational total = 0;
    for (const PriorOption& o : c.prior) {
      if (o.values.size() != c.unknown.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "candidate ", c.known.id, ": prior option arity mismatch"));
      }
      if (o.weight < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("candidate ", c.known.id, ": negative prior weight"));
      }
      total += o.weight;
    }
    if (!c.prior.empty() && total != 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "candidate ", c.known.id, ": prior sums to ",
          FormatRational(total), ", not 1"));
    }
    for (size_t k = 0; k < OptionsOf(c).size(); ++k) {
      Person p = Instantiate(c, k);
      if (absl::Status st = ValidatePerson(p, attacker.schema); !st.ok()) {
        return st;
      }
    }
    if (!geo.contains(c.known.block)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "candidate ", c.known.id, " lives outside the geography"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<size_t> CandidateIndex(const AttackerModel& attacker,
                                      int64_t id) {
  for (size_t i = 0; i < attacker.universe.size(); ++i) {
    if (attacker.universe[i].known.id == id) return i;
  }
  return absl::NotFoundError(absl::StrCat("person ", id, " not in universe"));
}

Person Instantiate(const CandidatePerson& candidate, size_t option) {
  Person p = candidate.known;
  if (candidate.prior.empty()) return p;
  const PriorOption& o = candidate.prior[option];
  for (size_t k = 0; k < candidate.unknown.size(); ++k) {
    SetAttribute(p, candidate.unknown[k], o.values[k]);
  }
  return p;
}

absl::StatusOr<std::optional<std::vector<World>>> EnumerateWorlds(
    const AttackerModel& attacker, const TargetTreatment& treatment,
    size_t cap) {
  if (absl::Status st = ValidateAttacker(attacker); !st.ok()) return st;
  using Kind = TargetTreatment::Kind;
  std::optional<size_t> target;
  if (treatment.kind != Kind::kAsModeled) {
    absl::StatusOr<size_t> t = CandidateIndex(attacker, treatment.target);
    if (!t.ok()) return t.status();
    target = *t;
  }
  if (treatment.kind == Kind::kReplaced &&
      treatment.replacement.id != treatment.target) {
    return absl::InvalidArgumentError("replacement must keep the target id");
  }

  const size_t n = attacker.universe.size();
  std::vector<std::vector<Choice>> choices(n);
  double count = 1;
  for (size_t i = 0; i < n; ++i) {
    const CandidatePerson& c = attacker.universe[i];
    const Rational inclusion = target == i ? Rational(1) : c.inclusion;
    if (inclusion < 1) choices[i].push_back({-1, 1 - inclusion});
    const std::vector<PriorOption> options = OptionsOf(c);
    for (size_t k = 0; k < options.size(); ++k) {
      Rational w = inclusion * options[k].weight;
      if (w > 0) choices[i].push_back({static_cast<int>(k), std::move(w)});
    }
    count *= static_cast<double>(choices[i].size());
  }
  if (count > static_cast<double>(cap)) return std::nullopt;

  const std::map<int, int> geography = GeographyOf(attacker);
  std::vector<World> worlds;
  worlds.reserve(static_cast<size_t>(count));
  std::vector<size_t> digit(n, 0);
  for (size_t w = 0; w < static_cast<size_t>(count); ++w) {
    Rational prior = 1;
    std::vector<int> option(n);
    std::vector<Person> persons;
    for (size_t i = 0; i < n; ++i) {
      const Choice& ch = choices[i][digit[i]];
      prior *= ch.weight;
      option[i] = ch.option;
      if (ch.option < 0) continue;
      Person p = Instantiate(attacker.universe[i], ch.option);
      if (target == i) {
        switch (treatment.kind) {
          case Kind::kRemoved:
            continue;
          case Kind::kBlanked:
            p = BlankRecordFor(p);
            break;
          case Kind::kReplaced:
            p = treatment.replacement;
            break;
          default:
            break;
        }
      }
      persons.push_back(std::move(p));
    }
    absl::StatusOr<Dataset> data =
        Dataset::Create(attacker.schema, std::move(persons), geography);
    if (!data.ok()) return data.status();
    worlds.push_back({std::move(prior), *std::move(data), std::move(option)});
    for (size_t i = n; i-- > 0;) {
      if (++digit[i] < choices[i].size()) break;
      digit[i] = 0;
    }
  }
  return worlds;
}

namespace {

absl::StatusOr<WorldPosterior> Normalize(std::vector<World> worlds,
                                         std::vector<Rational> mass) {
  WorldPosterior post;
  post.normalizer = 0;
  for (const Rational& m : mass) post.normalizer += m;
  if (post.normalizer == 0) {
    return absl::FailedPreconditionError(
        "release has zero probability under every candidate world");
  }
  for (size_t w = 0; w < worlds.size(); ++w) {
    if (mass[w] == 0) continue;
    post.probability.push_back(mass[w] / post.normalizer);
    post.support.push_back(std::move(worlds[w]));
  }
  return post;
}

}  // namespace

absl::StatusOr<std::optional<WorldPosterior>> PosteriorOverWorlds(
    std::vector<World> worlds, std::span<const Release> releases) {
  std::vector<Rational> mass(worlds.size());
  for (size_t w = 0; w < worlds.size(); ++w) {
    mass[w] = worlds[w].prior;
    for (const Release& r : releases) {
      if (mass[w] == 0) break;
      absl::StatusOr<std::optional<Rational>> l = Likelihood(r, worlds[w].data);
      if (!l.ok()) return l.status();
      if (!l->has_value()) return std::optional<WorldPosterior>();
      mass[w] *= **l;
    }
  }
  absl::StatusOr<WorldPosterior> post =
      Normalize(std::move(worlds), std::move(mass));
  if (!post.ok()) return post.status();
  return std::optional<WorldPosterior>(*std::move(post));
}

absl::StatusOr<WorldPosterior> PosteriorOverClasses(
    std::span<const World> worlds,
    std::span<const std::vector<PreparedCandidate>> prepared,
    std::span<const OutputClass> classes) {
  if (prepared.size() != classes.size()) {
    return absl::InvalidArgumentError("one output class per mechanism");
  }
  std::vector<Rational> mass(worlds.size());
  for (size_t w = 0; w < worlds.size(); ++w) {
    mass[w] = worlds[w].prior;
    for (size_t j = 0; j < classes.size() && mass[w] != 0; ++j) {
      absl::StatusOr<Rational> p = prepared[j][w].ClassProbability(classes[j]);
      if (!p.ok()) return p.status();
      mass[w] *= *p;
    }
  }
  return Normalize({worlds.begin(), worlds.end()}, std::move(mass));
}

absl::StatusOr<std::optional<WorldPosterior>> EnumeratePosterior(
    const AttackerModel& attacker, std::span<const Release> releases,
    const TargetTreatment& treatment, size_t cap) {
  absl::StatusOr<std::optional<std::vector<World>>> worlds =
      EnumerateWorlds(attacker, treatment, cap);
  if (!worlds.ok()) return worlds.status();
  if (!worlds->has_value()) return std::optional<WorldPosterior>();
  return PosteriorOverWorlds(**std::move(worlds), releases);
}

Rational Probability(const WorldPosterior& post,
                     const std::function<bool(const World&)>& event) {
  Rational p = 0;
  for (size_t w = 0; w < post.support.size(); ++w) {
    if (event(post.support[w])) p += post.probability[w];
  }
  return p;
}

namespace {

absl::StatusOr<Rational> MarginalImpl(const AttackerModel& attacker,
                                      const WorldPosterior& post,
                                      int64_t target, int value,
                                      Attribute attribute, bool require_in_d) {
  absl::StatusOr<size_t> index = CandidateIndex(attacker, target);
  if (!index.ok()) return index.status();
  const CandidatePerson& c = attacker.universe[*index];
  return Probability(post, [&](const World& w) {
    const int option = w.option[*index];
    if (option < 0) return false;
    if (require_in_d && w.data.Find(target) == nullptr) return false;
    return GetAttribute(Instantiate(c, option), attribute) == value;
  });
}

}  // namespace

absl::StatusOr<Rational> Marginal(const AttackerModel& attacker,
                                  const WorldPosterior& post, int64_t target,
                                  int value, Attribute attribute) {
  return MarginalImpl(attacker, post, target, value, attribute, true);
}

absl::StatusOr<Rational> LatentMarginal(const AttackerModel& attacker,
                                        const WorldPosterior& post,
                                        int64_t target, int value,
                                        Attribute attribute) {
  return MarginalImpl(attacker, post, target, value, attribute, false);
}

absl::StatusOr<Rational> PriorMarginal(const AttackerModel& attacker,
                                       int64_t target, int value,
                                       Attribute attribute) {
  absl::StatusOr<size_t> index = CandidateIndex(attacker, target);
  if (!index.ok()) return index.status();
  const CandidatePerson& c = attacker.universe[*index];
  Rational mass = 0;
  const std::vector<PriorOption> options = OptionsOf(c);
  for (size_t k = 0; k < options.size(); ++k) {
    if (GetAttribute(Instantiate(c, k), attribute) == value) {
      mass += options[k].weight;
    }
  }
  Rational p = c.inclusion * mass;
  return p;
}

absl::StatusOr<std::optional<LinkagePosterior>> ComputeLinkagePosterior(
    const AttackerModel& attacker, std::span<const Release> releases,
    size_t records_release, int64_t target, int value, Attribute attribute,
    size_t cap) {
  if (records_release >= releases.size()) {
    return absl::InvalidArgumentError("records release index out of range");
  }
  const Release& release = releases[records_release];
  const RecordList* records = release.records();
  if (records == nullptr) {
    return absl::FailedPreconditionError("release carries no record list");
  }
  absl::StatusOr<size_t> index = CandidateIndex(attacker, target);
  if (!index.ok()) return index.status();
  absl::StatusOr<std::optional<WorldPosterior>> post =
      EnumeratePosterior(attacker, releases, {}, cap);
  if (!post.ok()) return post.status();
  if (!post->has_value()) return std::optional<LinkagePosterior>();

  const size_t rows = records->rows.size();
  std::vector<int> multiplicity(rows);
  for (size_t i = 0; i < rows; ++i) {
    multiplicity[i] = static_cast<int>(
        std::count(records->rows.begin(), records->rows.end(),
                   records->rows[i]));
  }
  const std::string release_key = ProductsKey(release.products);
  const CandidatePerson& c = attacker.universe[*index];

  LinkagePosterior out;
  out.joint.assign(rows, Rational(0));
  out.link.assign(rows, Rational(0));
  const WorldPosterior& wp = **post;
  for (size_t w = 0; w < wp.support.size(); ++w) {
    const World& world = wp.support[w];
    const int option = world.option[*index];
    if (option < 0) continue;
    const bool value_matches =
        GetAttribute(Instantiate(c, option), attribute) == value;
    absl::StatusOr<std::optional<std::vector<Realization>>> realizations =
        Realizations(world.data, release.mechanism, cap);
    if (!realizations.ok()) return realizations.status();
    if (!realizations->has_value()) return std::optional<LinkagePosterior>();
    // Conditional realization weights given the observed release.
    std::vector<std::pair<Rational, const Dataset*>> matching;
    Rational total = 0;
    for (const Realization& r : **realizations) {
      absl::StatusOr<std::vector<Product>> products =
          ProductsOf(r.data, release.mechanism, release.targets);
      if (!products.ok()) return products.status();
      if (ProductsKey(*products) != release_key) continue;
      total += r.probability;
      matching.emplace_back(r.probability, &r.data);
    }
    if (total == 0) continue;
    for (const auto& [p, data] : matching) {
      const Person* protected_target = data->Find(target);
      if (protected_target == nullptr) continue;
      const std::vector<int> row =
          RecordRow(*protected_target, records->columns, release.mechanism);
      const Rational weight = wp.probability[w] * p / total;
      for (size_t i = 0; i < rows; ++i) {
        if (records->rows[i] != row) continue;
        Rational share = weight / multiplicity[i];
        if (value_matches) out.joint[i] += share;
        out.link[i] += share;
      }
    }
  }
  return std::optional<LinkagePosterior>(std::move(out));
}

}  // namespace sdl
