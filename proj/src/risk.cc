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

#include "sdl/risk.h"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"

namespace sdl {
namespace {

using Kind = TargetTreatment::Kind;

absl::StatusOr<WorldPosterior> Require(
    absl::StatusOr<std::optional<WorldPosterior>> post) {
  if (!post.ok()) return post.status();
  if (!post->has_value()) {
    return absl::UnavailableError("world enumeration exceeds the cap");
  }
  return **std::move(post);
}

absl::StatusOr<std::vector<World>> RequireWorlds(
    absl::StatusOr<std::optional<std::vector<World>>> worlds) {
  if (!worlds.ok()) return worlds.status();
  if (!worlds->has_value()) {
    return absl::UnavailableError("world enumeration exceeds the cap");
  }
  return **std::move(worlds);
}

Kind CounterfactualKind(CfConvention convention) {
  return convention == CfConvention::kRemoval ? Kind::kRemoved : Kind::kBlanked;
}

// Fills ratio fields from the two posteriors.
void SetRatio(RiskReport& report, const Rational& actual,
              const Rational& counterfactual) {
  report.posterior_actual = actual;
  report.posterior_counterfactual = counterfactual;
  report.difference = actual - counterfactual;
  if (actual == 0 && counterfactual == 0) {
    report.ratio = Rational(1);
    report.note = "value impossible under both worlds";
  } else if (actual == 0 || counterfactual == 0) {
    report.ratio.reset();
    report.ratio_unbounded = true;
  } else {
    report.ratio = actual / counterfactual;
  }
}

std::optional<Rational> ReleasesExpBound(std::span<const Release> releases) {
  Rational bound = 1;
  for (const Release& r : releases) {
    if (!r.epsilon) return std::nullopt;
    std::optional<Rational> e = r.epsilon->ExpBound();
    if (!e) return std::nullopt;
    bound *= *e;
  }
  return bound;
}

std::optional<Rational> PlansExpBound(std::span<const ReleasePlan> plans) {
  for (const ReleasePlan& p : plans) {
    if (!EpsilonOf(p.mechanism)) return std::nullopt;
  }
  return ComposedExpBound(plans);
}

// Latent value of the target in each world.
absl::StatusOr<std::vector<bool>> LatentMatches(const AttackerModel& attacker,
                                                std::span<const World> worlds,
                                                int64_t target, int value) {
  absl::StatusOr<size_t> index = CandidateIndex(attacker, target);
  if (!index.ok()) return index.status();
  const CandidatePerson& c = attacker.universe[*index];
  std::vector<bool> out;
  out.reserve(worlds.size());
  for (const World& w : worlds) {
    const int option = w.option[*index];
    out.push_back(option >= 0 &&
                  GetAttribute(Instantiate(c, option), Attribute::kSensitive) ==
                      value);
  }
  return out;
}

}  // namespace

std::string_view MethodologyName(Methodology m) {
  switch (m) {
    case Methodology::kAbsLink:
      return "AbsLink";
    case Methodology::kAbs:
      return "Abs";
    case Methodology::kPr2PDiff:
      return "Pr2P-diff";
    case Methodology::kPr2PRatio:
      return "Pr2P-ratio";
    case Methodology::kCfBayes:
      return "Cf-Bayes";
    case Methodology::kCfFreq:
      return "Cf-Freq";
  }
  return "?";
}

absl::StatusOr<Methodology> ParseMethodology(std::string_view name) {
  for (Methodology m :
       {Methodology::kAbsLink, Methodology::kAbs, Methodology::kPr2PDiff,
        Methodology::kPr2PRatio, Methodology::kCfBayes, Methodology::kCfFreq}) {
    if (MethodologyName(m) == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown methodology '", std::string(name), "'"));
}

std::string_view CfConventionName(CfConvention c) {
  return c == CfConvention::kRemoval ? "removal" : "blank";
}

absl::StatusOr<CfConvention> ParseCfConvention(std::string_view name) {
  if (name == "removal") return CfConvention::kRemoval;
  if (name == "blank") return CfConvention::kBlank;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown convention '", std::string(name), "'"));
}

std::string_view CfModeName(CfMode m) {
  switch (m) {
    case CfMode::kRealized:
      return "realized";
    case CfMode::kAverage:
      return "average";
    case CfMode::kWorst:
      return "worst";
  }
  return "?";
}

std::optional<Rational> RiskReport::Contrast() const {
  if (ratio_unbounded || !ratio || *ratio == 0) return std::nullopt;
  if (*ratio >= 1) return *ratio;
  Rational inverse = 1 / *ratio;
  return inverse;
}

absl::StatusOr<RiskReport> AbsRiskWithLinking(
    const AttackerModel& attacker, std::span<const Release> releases,
    int64_t target, int value) {
  RiskReport report;
  report.methodology = Methodology::kAbsLink;
  report.target = target;
  report.value = value;
  std::optional<size_t> records;
  for (size_t i = 0; i < releases.size(); ++i) {
    if (releases[i].HasRecords()) {
      records = i;
      break;
    }
  }
  if (!records) {
    report.not_applicable = true;
    report.note = "no record-level product to link against";
    return report;
  }
  absl::StatusOr<std::optional<LinkagePosterior>> linkage =
      ComputeLinkagePosterior(attacker, releases, *records, target, value);
  if (!linkage.ok()) return linkage.status();
  if (!linkage->has_value()) {
    return absl::UnavailableError("linkage enumeration exceeds the cap");
  }
  report.per_record = (*linkage)->joint;
  Rational best = 0;
  for (const Rational& p : report.per_record) best = std::max(best, p);
  report.posterior = best;
  return report;
}

absl::StatusOr<RiskReport> AbsRiskWithoutLinking(
    const AttackerModel& attacker, std::span<const Release> releases,
    int64_t target, int value) {
  absl::StatusOr<WorldPosterior> post =
      Require(EnumeratePosterior(attacker, releases));
  if (!post.ok()) return post.status();
  absl::StatusOr<Rational> m = Marginal(attacker, *post, target, value);
  if (!m.ok()) return m.status();
  RiskReport report;
  report.methodology = Methodology::kAbs;
  report.target = target;
  report.value = value;
  report.posterior = *std::move(m);
  return report;
}

absl::StatusOr<RiskReport> PriorToPosterior(const AttackerModel& attacker,
                                            std::span<const Release> releases,
                                            int64_t target, int value,
                                            Methodology mode) {
  if (mode != Methodology::kPr2PDiff && mode != Methodology::kPr2PRatio) {
    return absl::InvalidArgumentError("mode must be Pr2P-diff or Pr2P-ratio");
  }
  absl::StatusOr<Rational> prior = PriorMarginal(attacker, target, value);
  if (!prior.ok()) return prior.status();
  if (mode == Methodology::kPr2PRatio && *prior == 0) {
    return absl::InvalidArgumentError("prior-to-posterior ratio with zero prior");
  }
  absl::StatusOr<RiskReport> abs =
      AbsRiskWithoutLinking(attacker, releases, target, value);
  if (!abs.ok()) return abs.status();
  RiskReport report = *std::move(abs);
  report.methodology = mode;
  report.prior = *prior;
  report.difference = *report.posterior - *prior;
  if (mode == Methodology::kPr2PRatio) report.ratio = *report.posterior / *prior;
  return report;
}

absl::StatusOr<RiskReport> CounterfactualBayes(
    const AttackerModel& attacker, std::span<const Release> actual,
    std::span<const Release> counterfactual, int64_t target, int value,
    CfConvention convention) {
  RiskReport report;
  report.methodology = Methodology::kCfBayes;
  report.target = target;
  report.value = value;
  report.convention = convention;
  report.mode = CfMode::kRealized;
  report.exp_epsilon = ReleasesExpBound(actual);

  absl::StatusOr<WorldPosterior> post_a = Require(EnumeratePosterior(
      attacker, actual, {Kind::kForceIncluded, target, {}}));
  if (!post_a.ok()) return post_a.status();
  absl::StatusOr<Rational> pa = LatentMarginal(attacker, *post_a, target, value);
  if (!pa.ok()) return pa.status();

  absl::StatusOr<WorldPosterior> post_c = Require(EnumeratePosterior(
      attacker, counterfactual, {CounterfactualKind(convention), target, {}}));
  if (absl::IsFailedPrecondition(post_c.status())) {
    report.posterior_actual = *pa;
    report.ratio_unbounded = true;
    report.note = "the attacker's counterfactual model rules the output out";
    return report;
  }
  if (!post_c.ok()) return post_c.status();
  absl::StatusOr<Rational> pc = LatentMarginal(attacker, *post_c, target, value);
  if (!pc.ok()) return pc.status();
  SetRatio(report, *pa, *pc);
  return report;
}

namespace {

absl::StatusOr<Dataset> CounterfactualData(const Dataset& data, int64_t target,
                                           CfConvention convention) {
  const Person* p = data.Find(target);
  if (p == nullptr) {
    return absl::NotFoundError(
        absl::StrCat("person ", target, " is not in the data"));
  }
  if (convention == CfConvention::kRemoval) return data.Without(target);
  return data.Replacing(BlankRecordFor(*p));
}

absl::StatusOr<std::vector<Release>> ApplyPlans(
    const Dataset& data, std::span<const ReleasePlan> plans) {
  std::vector<Release> out;
  for (size_t k = 0; k < plans.size(); ++k) {
    absl::StatusOr<Release> r = Apply(data, plans[k].mechanism,
                                      plans[k].targets, absl::StrCat("r", k));
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

// Calls `visit(weight, post_a, post_c)` once per joint noise class, with
// weight = P(class | data). post_c is absent without a counterfactual, and
// either posterior is absent when its world set cannot produce the output.
using Visit = std::function<absl::Status(const Rational&,
                                         const std::optional<Rational>&,
                                         const std::optional<Rational>&)>;

absl::Status SweepOutputs(const AttackerModel& attacker, const Dataset& data,
                          std::span<const ReleasePlan> plans, int64_t target,
                          int value, const TargetTreatment& actual_treatment,
                          std::optional<CfConvention> convention,
                          const Visit& visit) {
  for (const ReleasePlan& plan : plans) {
    if (plan.mechanism.kind == MechanismKind::kSwap) {
      return absl::UnimplementedError(
          "output sweeps do not pair Swap realizations");
    }
  }
  struct Side {
    std::vector<World> worlds;
    std::vector<bool> match;
    std::vector<Rational> fixed;  // prior x deterministic likelihoods
    std::vector<std::vector<PreparedCandidate>> noise;  // [plan][world]
  };
  auto make_side = [&](const TargetTreatment& treatment,
                       const Dataset& side_data) -> absl::StatusOr<Side> {
    Side side;
    absl::StatusOr<std::vector<World>> worlds =
        RequireWorlds(EnumerateWorlds(attacker, treatment));
    if (!worlds.ok()) return worlds.status();
    side.worlds = *std::move(worlds);
    absl::StatusOr<std::vector<bool>> match =
        LatentMatches(attacker, side.worlds, target, value);
    if (!match.ok()) return match.status();
    side.match = *std::move(match);
    for (const World& w : side.worlds) side.fixed.push_back(w.prior);
    for (const ReleasePlan& plan : plans) {
      if (IsNoiseKind(plan.mechanism.kind)) continue;
      absl::StatusOr<std::vector<Product>> products =
          ProductsOf(side_data, plan.mechanism, plan.targets);
      if (!products.ok()) return products.status();
      Release observed;
      observed.mechanism = plan.mechanism;
      observed.targets = plan.targets;
      observed.products = *std::move(products);
      for (size_t w = 0; w < side.worlds.size(); ++w) {
        if (side.fixed[w] == 0) continue;
        absl::StatusOr<std::optional<Rational>> l =
            Likelihood(observed, side.worlds[w].data);
        if (!l.ok()) return l.status();
        side.fixed[w] *= **l;
      }
    }
    return side;
  };

  absl::StatusOr<Side> a = make_side(actual_treatment, data);
  if (!a.ok()) return a.status();
  std::optional<Side> c;
  std::optional<Dataset> cf_data;
  if (convention) {
    absl::StatusOr<Dataset> d = CounterfactualData(data, target, *convention);
    if (!d.ok()) return d.status();
    cf_data = *std::move(d);
    absl::StatusOr<Side> side =
        make_side({CounterfactualKind(*convention), target, {}}, *cf_data);
    if (!side.ok()) return side.status();
    c = *std::move(side);
  }

  // prob[plan][class][world] per side, and P(class | data).
  std::vector<std::vector<std::vector<Rational>>> prob_a, prob_c;
  std::vector<std::vector<Rational>> weight;
  double joint = 1;
  for (const ReleasePlan& plan : plans) {
    if (!IsNoiseKind(plan.mechanism.kind)) continue;
    absl::StatusOr<PreparedCandidate> pd =
        PreparedCandidate::Create(plan.mechanism, plan.targets, data);
    if (!pd.ok()) return pd.status();
    std::vector<std::vector<int64_t>> truths;
    truths.emplace_back(pd->cells().begin(), pd->cells().end());
    std::vector<PreparedCandidate> pa, pc;
    for (size_t w = 0; w < a->worlds.size(); ++w) {
      absl::StatusOr<PreparedCandidate> p = PreparedCandidate::Create(
          plan.mechanism, plan.targets, a->worlds[w].data);
      if (!p.ok()) return p.status();
      if (a->fixed[w] != 0) truths.emplace_back(p->cells().begin(), p->cells().end());
      pa.push_back(*std::move(p));
    }
    if (c) {
      absl::StatusOr<PreparedCandidate> pcf =
          PreparedCandidate::Create(plan.mechanism, plan.targets, *cf_data);
      if (!pcf.ok()) return pcf.status();
      std::vector<int64_t> shift(pd->cells().size());
      for (size_t i = 0; i < shift.size(); ++i) {
        shift[i] = pd->cells()[i] - pcf->cells()[i];
      }
      for (size_t w = 0; w < c->worlds.size(); ++w) {
        absl::StatusOr<PreparedCandidate> p = PreparedCandidate::Create(
            plan.mechanism, plan.targets, c->worlds[w].data);
        if (!p.ok()) return p.status();
        absl::StatusOr<PreparedCandidate> shifted = p->Shifted(shift);
        if (!shifted.ok()) return shifted.status();
        if (c->fixed[w] != 0) {
          truths.emplace_back(shifted->cells().begin(), shifted->cells().end());
        }
        pc.push_back(*std::move(shifted));
      }
    }
    absl::StatusOr<std::vector<Product>> shape =
        ProductsOf(data, plan.mechanism, plan.targets);
    if (!shape.ok()) return shape.status();
    absl::StatusOr<std::vector<OutputClass>> classes = EnumerateNoiseClasses(
        plan.mechanism, plan.targets, *shape, truths);
    if (!classes.ok()) return classes.status();
    auto matrix = [&](const std::vector<PreparedCandidate>& prepared)
        -> absl::StatusOr<std::vector<std::vector<Rational>>> {
      std::vector<std::vector<Rational>> m(classes->size());
      for (size_t k = 0; k < classes->size(); ++k) {
        for (const PreparedCandidate& p : prepared) {
          absl::StatusOr<Rational> x = p.ClassProbability((*classes)[k]);
          if (!x.ok()) return x.status();
          m[k].push_back(*std::move(x));
        }
      }
      return m;
    };
    absl::StatusOr<std::vector<std::vector<Rational>>> ma = matrix(pa);
    if (!ma.ok()) return ma.status();
    prob_a.push_back(*std::move(ma));
    absl::StatusOr<std::vector<std::vector<Rational>>> mc = matrix(pc);
    if (!mc.ok()) return mc.status();
    prob_c.push_back(*std::move(mc));
    std::vector<Rational> wd;
    for (const OutputClass& k : *classes) {
      absl::StatusOr<Rational> x = pd->ClassProbability(k);
      if (!x.ok()) return x.status();
      wd.push_back(*std::move(x));
    }
    joint *= static_cast<double>(wd.size());
    weight.push_back(std::move(wd));
  }
  if (joint > static_cast<double>(kEnumerationCap)) {
    return absl::ResourceExhaustedError("joint output space exceeds the cap");
  }

  auto posterior = [](const Side& side,
                      const std::vector<std::vector<std::vector<Rational>>>& prob,
                      const std::vector<size_t>& digit) -> std::optional<Rational> {
    Rational num = 0;
    Rational den = 0;
    for (size_t w = 0; w < side.worlds.size(); ++w) {
      Rational m = side.fixed[w];
      for (size_t k = 0; k < prob.size() && m != 0; ++k) m *= prob[k][digit[k]][w];
      if (m == 0) continue;
      if (side.match[w]) num += m;
      den += m;
    }
    if (den == 0) return std::nullopt;
    Rational p = num / den;
    return p;
  };

  std::vector<size_t> digit(weight.size(), 0);
  for (size_t n = 0; n < static_cast<size_t>(joint); ++n) {
    Rational w = 1;
    for (size_t k = 0; k < weight.size(); ++k) w *= weight[k][digit[k]];
    std::optional<Rational> post_a = posterior(*a, prob_a, digit);
    std::optional<Rational> post_c;
    if (c) post_c = posterior(*c, prob_c, digit);
    if (absl::Status st = visit(w, post_a, post_c); !st.ok()) return st;
    for (size_t k = weight.size(); k-- > 0;) {
      if (++digit[k] < weight[k].size()) break;
      digit[k] = 0;
    }
  }
  return absl::OkStatus();
}

// Keeps the pair with the largest contrast; unbounded wins outright.
struct WorstTracker {
  bool seen = false;
  bool unbounded = false;
  std::optional<Rational> contrast;
  Rational a = 0;
  Rational c = 0;

  void Offer(const Rational& pa, const std::optional<Rational>& pc) {
    if (unbounded) return;
    if (!pc) {
      unbounded = true;
      a = pa;
      c = 0;
      return;
    }
    std::optional<Rational> k;
    if (pa == 0 && *pc == 0) {
      k = Rational(1);
    } else if (pa != 0 && *pc != 0) {
      k = pa > *pc ? Rational(pa / *pc) : Rational(*pc / pa);
    }
    if (!k) {
      unbounded = true;
      a = pa;
      c = *pc;
      return;
    }
    if (!contrast || *k > *contrast) {
      contrast = k;
      a = pa;
      c = *pc;
    }
    seen = true;
  }
};

}  // namespace

absl::StatusOr<RiskReport> CounterfactualBayesFromData(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    CfConvention convention) {
  absl::StatusOr<Dataset> cf = CounterfactualData(data, target, convention);
  if (!cf.ok()) return cf.status();
  absl::StatusOr<std::vector<Release>> actual = ApplyPlans(data, plans);
  if (!actual.ok()) return actual.status();
  absl::StatusOr<std::vector<Release>> counterfactual = ApplyPlans(*cf, plans);
  if (!counterfactual.ok()) return counterfactual.status();
  return CounterfactualBayes(attacker, *actual, *counterfactual, target, value,
                             convention);
}

absl::StatusOr<RiskReport> CounterfactualBayesOverOutputs(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    CfConvention convention, CfMode mode) {
  if (mode == CfMode::kRealized) {
    return absl::InvalidArgumentError("realized mode scores observed releases");
  }
  RiskReport report;
  report.methodology = Methodology::kCfBayes;
  report.target = target;
  report.value = value;
  report.convention = convention;
  report.mode = mode;
  report.exp_epsilon = PlansExpBound(plans);

  Rational avg_a = 0;
  Rational avg_c = 0;
  WorstTracker worst;
  absl::Status st = SweepOutputs(
      attacker, data, plans, target, value, {Kind::kForceIncluded, target, {}},
      convention,
      [&](const Rational& w, const std::optional<Rational>& pa,
          const std::optional<Rational>& pc) -> absl::Status {
        if (w == 0) return absl::OkStatus();
        if (!pa) {
          return absl::FailedPreconditionError(
              "the attacker model rules out an output of the data");
        }
        if (mode == CfMode::kAverage) {
          if (!pc) {
            return absl::FailedPreconditionError(
                "the attacker model rules out a counterfactual output");
          }
          avg_a += w * *pa;
          avg_c += w * *pc;
        } else {
          worst.Offer(*pa, pc);
        }
        return absl::OkStatus();
      });
  if (!st.ok()) return st;
  if (mode == CfMode::kAverage) {
    SetRatio(report, avg_a, avg_c);
    return report;
  }
  SetRatio(report, worst.a, worst.c);
  if (worst.unbounded) {
    report.ratio.reset();
    report.ratio_unbounded = true;
    report.note = "some output separates the worlds completely";
  }
  return report;
}

absl::StatusOr<RiskReport> PriorToPosteriorOverOutputs(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value) {
  absl::StatusOr<Rational> prior = PriorMarginal(attacker, target, value);
  if (!prior.ok()) return prior.status();
  RiskReport report;
  report.methodology = Methodology::kPr2PRatio;
  report.target = target;
  report.value = value;
  report.mode = CfMode::kWorst;
  report.prior = *prior;
  report.exp_epsilon = PlansExpBound(plans);
  WorstTracker worst;
  Rational max_diff = 0;
  absl::Status st = SweepOutputs(
      attacker, data, plans, target, value, {}, std::nullopt,
      [&](const Rational& w, const std::optional<Rational>& pa,
          const std::optional<Rational>&) -> absl::Status {
        if (w == 0) return absl::OkStatus();
        if (!pa) {
          return absl::FailedPreconditionError(
              "the attacker model rules out an output of the data");
        }
        worst.Offer(*pa, *prior);
        Rational d = *pa - *prior;
        if (abs(d) > abs(max_diff)) max_diff = d;
        return absl::OkStatus();
      });
  if (!st.ok()) return st;
  report.posterior = worst.a;
  report.difference = max_diff;
  if (worst.unbounded) {
    report.ratio_unbounded = true;
  } else {
    report.ratio = *prior == 0 ? Rational(1) : Rational(worst.a / *prior);
  }
  return report;
}

absl::StatusOr<TradeoffCurve> CounterfactualFreq(
    std::span<const ReleasePlan> plans, const Dataset& actual,
    const Dataset& counterfactual) {
  absl::StatusOr<std::vector<std::pair<Rational, Rational>>> probs =
      JointClassProbabilities(plans, actual, counterfactual);
  if (!probs.ok()) return probs.status();
  // (p1 under the actual world, p0 under the counterfactual).
  struct Entry {
    bool infinite;
    Rational ratio;
    Rational p0;
    Rational p1;
  };
  std::vector<Entry> entries;
  for (auto& [p1, p0] : *probs) {
    if (p1 == 0 && p0 == 0) continue;
    if (p0 == 0) {
      entries.push_back({true, Rational(0), p0, p1});
    } else {
      entries.push_back({false, p1 / p0, p0, p1});
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     if (a.infinite != b.infinite) return a.infinite;
                     return a.ratio > b.ratio;
                   });
  TradeoffCurve curve;
  curve.epsilon_bound = PlansExpBound(plans);
  curve.points.push_back({Rational(0), Rational(0)});
  Rational alpha = 0;
  Rational power = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    alpha += entries[i].p0;
    power += entries[i].p1;
    const bool same_as_next =
        i + 1 < entries.size() && entries[i + 1].infinite == entries[i].infinite &&
        entries[i + 1].ratio == entries[i].ratio;
    if (same_as_next) continue;
    curve.points.push_back({alpha, power});
  }
  if (curve.epsilon_bound) {
    for (const TradeoffPoint& p : curve.points) {
      Rational cap = *curve.epsilon_bound * p.alpha;
      if (cap > 1) cap = 1;
      if (p.power > cap) curve.within_bound = false;
    }
  }
  return curve;
}

absl::StatusOr<RiskReport> InvariantCounterfactual(
    const AttackerModel& attacker, const Dataset& data,
    std::span<const ReleasePlan> plans, int64_t target, int value,
    Invariant invariant) {
  if (invariant == Invariant::kNone) {
    return CounterfactualBayesFromData(attacker, data, plans, target, value,
                                       CfConvention::kRemoval);
  }
  absl::StatusOr<size_t> index = CandidateIndex(attacker, target);
  if (!index.ok()) return index.status();
  const CandidatePerson& c = attacker.universe[*index];
  const Person* actual_record = data.Find(target);
  if (actual_record == nullptr) {
    return absl::NotFoundError(
        absl::StrCat("person ", target, " is not in the data"));
  }
  const std::optional<int> region = data.RegionOf(actual_record->block);

  RiskReport report;
  report.methodology = Methodology::kCfBayes;
  report.target = target;
  report.value = value;
  report.mode = CfMode::kRealized;
  const std::string note =
      "invariant: target region and region totals held fixed";

  absl::StatusOr<std::vector<Release>> actual = ApplyPlans(data, plans);
  if (!actual.ok()) return actual.status();
  report.exp_epsilon = ReleasesExpBound(*actual);
  absl::StatusOr<WorldPosterior> post_a = Require(EnumeratePosterior(
      attacker, *actual, {Kind::kForceIncluded, target, {}}));
  if (!post_a.ok()) return post_a.status();
  absl::StatusOr<Rational> pa = LatentMarginal(attacker, *post_a, target, value);
  if (!pa.ok()) return pa.status();

  const size_t options = c.prior.empty() ? 1 : c.prior.size();
  WorstTracker worst;
  for (const auto& [block, r] : data.geography()) {
    if (r != region) continue;
    for (size_t k = 0; k < options; ++k) {
      Person alternative = Instantiate(c, k);
      alternative.block = block;
      alternative.imputed = actual_record->imputed;
      absl::StatusOr<Dataset> alt_data = data.Replacing(alternative);
      if (!alt_data.ok()) return alt_data.status();
      absl::StatusOr<std::vector<Release>> releases = ApplyPlans(*alt_data, plans);
      if (!releases.ok()) return releases.status();
      absl::StatusOr<WorldPosterior> post_c = Require(EnumeratePosterior(
          attacker, *releases, {Kind::kReplaced, target, alternative}));
      if (absl::IsFailedPrecondition(post_c.status())) {
        worst.Offer(*pa, std::nullopt);
        continue;
      }
      if (!post_c.ok()) return post_c.status();
      absl::StatusOr<Rational> pc =
          LatentMarginal(attacker, *post_c, target, value);
      if (!pc.ok()) return pc.status();
      worst.Offer(*pa, *pc);
    }
  }
  SetRatio(report, worst.a, worst.c);
  report.posterior_actual = *pa;
  if (worst.unbounded) {
    report.ratio.reset();
    report.ratio_unbounded = true;
  }
  report.note = note;
  return report;
}

}  // namespace sdl
