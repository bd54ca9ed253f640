// Copyright (C) 2026 The scibrowse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scibrowse/references.h"

#include <algorithm>
#include <climits>
#include <set>
#include <tuple>
#include <unordered_map>

#include "scibrowse/article_json.h"
#include "scibrowse/error.h"
#include "scibrowse/utf8.h"

namespace scibrowse {

std::string_view OrderModeName(OrderMode mode) {
  switch (mode) {
    case OrderMode::kAppearance: return "appearance";
    case OrderMode::kAlphabetical: return "alphabetical";
    case OrderMode::kOriginal: return "original";
  }
  return "original";
}

std::optional<OrderMode> ParseOrderMode(std::string_view name) {
  if (name == "appearance") return OrderMode::kAppearance;
  if (name == "alphabetical") return OrderMode::kAlphabetical;
  if (name == "original") return OrderMode::kOriginal;
  return std::nullopt;
}

bool RenumberMap::IsBijection(int reference_count) const {
  if (static_cast<int>(pairs.size()) != reference_count) return false;
  std::set<int> seen;
  for (const auto& [from, to] : pairs) {
    if (from < 1 || from > reference_count) return false;
    if (to < 1 || to > reference_count) return false;
    if (!seen.insert(to).second) return false;
  }
  return true;
}

ReferenceOrder OrderOriginal(const Article& article) {
  ReferenceOrder order;
  order.mode = OrderMode::kOriginal;
  for (const auto& r : article.references) order.sequence.push_back(r.id);
  return order;
}

ReferenceOrder OrderByAppearance(const Article& article) {
  ReferenceOrder order;
  order.mode = OrderMode::kAppearance;
  std::set<std::string> seen;
  ForEachBlock(article, [&](const ContentBlock& b) {
    // Marks are stored in offset order; split marks share an offset and are
    // already in ascending original-number order.
    for (const auto& m : b.marks) {
      if (!m.resolved) continue;
      for (const auto& id : m.target_ref_ids) {
        if (FindReference(article, id) == nullptr) continue;
        if (seen.insert(id).second) order.sequence.push_back(id);
      }
    }
  });
  for (const auto& r : article.references) {
    if (!seen.contains(r.id)) order.sequence.push_back(r.id);
  }
  return order;
}

namespace {

long YearKey(const std::string& year) {
  long v = 0;
  bool any = false;
  for (char c : year) {
    if (c < '0' || c > '9') break;
    v = v * 10 + (c - '0');
    any = true;
    if (v > 100000) break;
  }
  return any ? v : LONG_MAX;  // missing years sort last
}

}  // namespace

ReferenceOrder OrderAlphabetical(const Article& article) {
  struct Key {
    std::string surname;
    long year;
    std::string title;
    int number;
    const Reference* ref;
  };
  std::vector<Key> keys;
  ReferenceOrder order;
  order.mode = OrderMode::kAlphabetical;
  for (const auto& r : article.references) {
    Key k;
    if (r.authors.empty() || r.authors.front().surname.empty()) {
      k.surname = utf8::FoldCase(r.title);
      order.flagged.push_back(r.id);
    } else {
      k.surname = utf8::FoldCase(r.authors.front().surname);
    }
    k.year = YearKey(r.year);
    k.title = utf8::FoldCase(r.title);
    k.number = r.original_number;
    k.ref = &r;
    keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.surname, a.year, a.title, a.number) <
           std::tie(b.surname, b.year, b.title, b.number);
  });
  for (const auto& k : keys) order.sequence.push_back(k.ref->id);
  return order;
}

ReferenceOrder OrderBy(const Article& article, OrderMode mode) {
  switch (mode) {
    case OrderMode::kAppearance: return OrderByAppearance(article);
    case OrderMode::kAlphabetical: return OrderAlphabetical(article);
    case OrderMode::kOriginal: return OrderOriginal(article);
  }
  return OrderOriginal(article);
}

RenumberResult Renumber(const Article& article, const ReferenceOrder& order) {
  const size_t n = article.references.size();
  if (order.sequence.size() != n) {
    throw Error(ErrorCode::kIncompleteOrder,
                "order lists " + std::to_string(order.sequence.size()) +
                    " references; article has " + std::to_string(n));
  }
  std::unordered_map<std::string, int> display_of;
  RenumberResult result;
  for (size_t i = 0; i < n; ++i) {
    const Reference* r = FindReference(article, order.sequence[i]);
    if (r == nullptr) {
      throw Error(ErrorCode::kIncompleteOrder,
                  "order names unknown reference '" + order.sequence[i] + "'");
    }
    if (!display_of.emplace(r->id, static_cast<int>(i) + 1).second) {
      throw Error(ErrorCode::kIncompleteOrder,
                  "order repeats reference '" + r->id + "'");
    }
    result.map.pairs[r->original_number] = static_cast<int>(i) + 1;
  }

  result.article = article;
  auto rewrite = [&](ContentBlock& b) {
    for (auto& m : b.marks) {
      if (!m.resolved || m.target_ref_ids.empty()) continue;
      int best = 0;
      for (const auto& id : m.target_ref_ids) {
        auto it = display_of.find(id);
        if (it == display_of.end()) continue;
        if (best == 0 || it->second < best) best = it->second;
      }
      if (best != 0) m.display_number = best;
    }
  };
  for (auto& b : result.article.abstract) rewrite(b);
  std::function<void(std::vector<Section>&)> walk =
      [&](std::vector<Section>& sections) {
        for (auto& s : sections) {
          for (auto& b : s.blocks) rewrite(b);
          walk(s.children);
        }
      };
  walk(result.article.sections);
  return result;
}

Json ReferenceOrderToJson(const Article& article, const ReferenceOrder& order,
                          const RenumberMap& map) {
  Json j = Json::object();
  j["article_id"] = article.id;
  j["order"] = std::string(OrderModeName(order.mode));
  Json refs = Json::array();
  for (size_t i = 0; i < order.sequence.size(); ++i) {
    const Reference* r = FindReference(article, order.sequence[i]);
    if (r == nullptr) continue;
    Json e = ReferenceToJson(*r);
    e["display_number"] = static_cast<int>(i) + 1;
    refs.push_back(std::move(e));
  }
  j["references"] = std::move(refs);
  Json pairs = Json::array();
  for (const auto& [from, to] : map.pairs) {
    Json p = Json::object();
    p["original_number"] = from;
    p["display_number"] = to;
    pairs.push_back(std::move(p));
  }
  j["renumber_map"] = std::move(pairs);
  Json flagged = Json::array();
  for (const auto& id : order.flagged) flagged.push_back(id);
  j["flagged"] = std::move(flagged);
  return j;
}

}  // namespace scibrowse
