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

#include "sdl/reident.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"

namespace sdl {
namespace {

bool UsesAge(const KeySpec& key) {
  return std::find(key.attributes.begin(), key.attributes.end(),
                   Attribute::kAge) != key.attributes.end();
}

// Key values with age mapped per the mode. Under kPlusMinusOne the age is
// left out of the key and compared separately.
std::vector<int> KeyOf(const Person& p, const KeySpec& key) {
  std::vector<int> out;
  for (Attribute a : key.attributes) {
    if (a == Attribute::kAge) {
      if (key.age_mode == AgeMode::kPlusMinusOne) continue;
      if (key.age_mode == AgeMode::kBinned) {
        out.push_back(key.bins->BinOfUnchecked(p.age));
        continue;
      }
    }
    out.push_back(GetAttribute(p, a));
  }
  return out;
}

bool FullTupleEqual(const Person& a, const Person& b) {
  return a.block == b.block && a.sex == b.sex && a.age == b.age &&
         a.race == b.race && a.ethnicity == b.ethnicity;
}

// Kuhn's augmenting paths with adjacency visited in the given order.
class Matcher {
 public:
  Matcher(const std::vector<std::vector<int>>& adjacency, size_t right)
      : adjacency_(adjacency), match_right_(right, -1) {}

  size_t Run(const std::vector<bool>& left_off,
             const std::vector<bool>& right_off) {
    std::fill(match_right_.begin(), match_right_.end(), -1);
    size_t size = 0;
    for (size_t u = 0; u < adjacency_.size(); ++u) {
      if (left_off[u]) continue;
      std::vector<bool> seen(match_right_.size(), false);
      if (Augment(static_cast<int>(u), seen, right_off)) ++size;
    }
    return size;
  }

 private:
  bool Augment(int u, std::vector<bool>& seen,
               const std::vector<bool>& right_off) {
    for (int v : adjacency_[u]) {
      if (seen[v] || right_off[v]) continue;
      seen[v] = true;
      if (match_right_[v] < 0 || Augment(match_right_[v], seen, right_off)) {
        match_right_[v] = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& adjacency_;
  std::vector<int> match_right_;
};

// Lexicographically smallest maximum matching of one component. Left and
// right vertices are already in id order.
std::vector<std::pair<int, int>> LexMaxMatching(
    const std::vector<std::vector<int>>& adjacency, size_t right) {
  Matcher matcher(adjacency, right);
  std::vector<bool> left_off(adjacency.size(), false);
  std::vector<bool> right_off(right, false);
  size_t target = matcher.Run(left_off, right_off);
  std::vector<std::pair<int, int>> out;
  for (size_t u = 0; u < adjacency.size() && target > 0; ++u) {
    left_off[u] = true;
    for (int v : adjacency[u]) {
      if (right_off[v]) continue;
      right_off[v] = true;
      if (matcher.Run(left_off, right_off) + 1 == target) {
        out.emplace_back(static_cast<int>(u), v);
        --target;
        break;
      }
      right_off[v] = false;
    }
  }
  return out;
}

}  // namespace

absl::Status ValidateKey(const KeySpec& key) {
  if (key.attributes.empty()) {
    return absl::InvalidArgumentError("key needs at least one attribute");
  }
  std::set<Attribute> seen;
  for (Attribute a : key.attributes) {
    if (a == Attribute::kSensitive) {
      return absl::InvalidArgumentError("the sensitive flag cannot be a key");
    }
    if (!seen.insert(a).second) {
      return absl::InvalidArgumentError("repeated key attribute");
    }
  }
  if (key.age_mode == AgeMode::kBinned && !key.bins) {
    return absl::InvalidArgumentError("binned age matching needs bins");
  }
  return absl::OkStatus();
}

size_t MaximumMatchingSize(const std::vector<std::vector<int>>& adjacency,
                           size_t right_size) {
  Matcher matcher(adjacency, right_size);
  return matcher.Run(std::vector<bool>(adjacency.size(), false),
                     std::vector<bool>(right_size, false));
}

absl::StatusOr<MatchResult> MatchOneToOne(std::span<const Person> attacker,
                                          const Dataset& confidential,
                                          const KeySpec& key,
                                          bool data_defined_only) {
  if (absl::Status st = ValidateKey(key); !st.ok()) return st;
  if (key.age_mode == AgeMode::kBinned &&
      key.bins->max_age() < confidential.schema().max_age()) {
    return absl::InvalidArgumentError("age bins do not cover the schema");
  }
  for (const Person& p : attacker) {
    if (p.age < 0 || p.age > confidential.schema().max_age()) {
      return absl::OutOfRangeError(
          absl::StrCat("attacker record ", p.id, " has age out of range"));
    }
  }
  std::vector<const Person*> a_sorted;
  for (const Person& p : attacker) a_sorted.push_back(&p);
  std::vector<const Person*> c_sorted;
  for (const Person& p : confidential.persons()) c_sorted.push_back(&p);
  auto by_id = [](const Person* x, const Person* y) { return x->id < y->id; };
  std::stable_sort(a_sorted.begin(), a_sorted.end(), by_id);
  std::stable_sort(c_sorted.begin(), c_sorted.end(), by_id);

  std::map<std::vector<int>, std::pair<std::vector<const Person*>,
                                       std::vector<const Person*>>>
      groups;
  for (const Person* p : a_sorted) groups[KeyOf(*p, key)].first.push_back(p);
  for (const Person* p : c_sorted) groups[KeyOf(*p, key)].second.push_back(p);

  MatchResult result;
  result.attacker_size = attacker.size();
  const bool tolerant = key.age_mode == AgeMode::kPlusMinusOne && UsesAge(key);
  for (const auto& [k, sides] : groups) {
    const auto& [left, right] = sides;
    if (left.empty() || right.empty()) continue;
    if (!tolerant) {
      for (size_t i = 0; i < std::min(left.size(), right.size()); ++i) {
        result.assignments.emplace_back(left[i]->id, right[i]->id);
      }
      continue;
    }
    std::vector<std::vector<int>> adjacency(left.size());
    for (size_t i = 0; i < left.size(); ++i) {
      for (size_t j = 0; j < right.size(); ++j) {
        if (std::abs(left[i]->age - right[j]->age) <= 1) {
          adjacency[i].push_back(static_cast<int>(j));
        }
      }
    }
    for (auto [i, j] : LexMaxMatching(adjacency, right.size())) {
      result.assignments.emplace_back(left[i]->id, right[j]->id);
    }
  }
  std::sort(result.assignments.begin(), result.assignments.end());
  result.match_count = result.assignments.size();

  std::map<int64_t, const Person*> a_by_id;
  for (const Person* p : a_sorted) a_by_id.emplace(p->id, p);
  for (const auto& [a, c] : result.assignments) {
    const Person* cp = confidential.Find(c);
    if (data_defined_only && cp->imputed) continue;
    if (FullTupleEqual(*a_by_id.at(a), *cp)) ++result.confirmed_count;
  }
  return result;
}

int BlockSizeBin(size_t block_size) {
  return block_size < 5 ? 0 : block_size < 10 ? 1 : block_size < 50 ? 2 : 3;
}

int HomogeneityBin(size_t modal_count, size_t block_size) {
  // modal / size against 1/2 and 3/4, in integers.
  if (modal_count == block_size) return 3;
  if (4 * modal_count >= 3 * block_size) return 2;
  if (2 * modal_count >= block_size) return 1;
  return 0;
}

std::string_view GroupLabel(Grouping grouping, int bin) {
  static constexpr std::string_view kSize[] = {"size_1_4", "size_5_9",
                                               "size_10_49", "size_50_plus"};
  static constexpr std::string_view kHomogeneity[] = {
      "homogeneity_below_1_2", "homogeneity_1_2_to_3_4",
      "homogeneity_3_4_to_1", "homogeneity_1"};
  return grouping == Grouping::kBlockSize ? kSize[bin] : kHomogeneity[bin];
}

std::vector<GroupRate> GroupRates(const MatchResult& result,
                                  std::span<const Person> attacker,
                                  const Dataset& confidential,
                                  Grouping grouping, bool data_defined_only) {
  std::map<int, std::vector<const Person*>> by_block;
  for (const Person& p : confidential.persons()) by_block[p.block].push_back(&p);

  std::map<int, int> bin_of_block;
  for (const auto& [block, members] : by_block) {
    const size_t n = members.size();
    if (grouping == Grouping::kBlockSize) {
      bin_of_block[block] = BlockSizeBin(n);
      continue;
    }
    std::map<std::pair<int, int>, size_t> counts;
    size_t modal = 0;
    for (const Person* p : members) {
      modal = std::max(modal, ++counts[{p->race, p->ethnicity}]);
    }
    bin_of_block[block] = HomogeneityBin(modal, n);
  }

  std::map<int64_t, const Person*> a_by_id;
  for (const Person& p : attacker) a_by_id.emplace(p.id, &p);
  std::vector<GroupRate> rates(kGroupBins);
  for (int b = 0; b < kGroupBins; ++b) {
    rates[b].label = std::string(GroupLabel(grouping, b));
  }
  for (const Person& p : confidential.persons()) {
    ++rates[bin_of_block[p.block]].persons;
  }
  for (const auto& [a, c] : result.assignments) {
    const Person* cp = confidential.Find(c);
    GroupRate& g = rates[bin_of_block[cp->block]];
    ++g.matched;
    auto it = a_by_id.find(a);
    if (it != a_by_id.end() && FullTupleEqual(*it->second, *cp) &&
        !(data_defined_only && cp->imputed)) {
      ++g.confirmed;
    }
  }
  std::vector<GroupRate> out;
  for (GroupRate& g : rates) {
    if (g.persons == 0) continue;
    g.rate = static_cast<double>(g.matched) / static_cast<double>(g.persons);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace sdl
