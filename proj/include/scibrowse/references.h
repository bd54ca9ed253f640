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

// Reference-list orderings and the renumbering of in-text citations.
//
// Renumbering is absolute: a mark's display number is always the position
// of its target reference in the chosen order. It never depends on the
// numbers currently shown, so switching modes back and forth is lossless.

#ifndef SCIBROWSE_REFERENCES_H_
#define SCIBROWSE_REFERENCES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"

namespace scibrowse {

enum class OrderMode { kAppearance, kAlphabetical, kOriginal };

std::string_view OrderModeName(OrderMode mode);
std::optional<OrderMode> ParseOrderMode(std::string_view name);

struct ReferenceOrder {
  OrderMode mode = OrderMode::kOriginal;
  std::vector<std::string> sequence;  // reference ids
  // References sorted by a fallback key (no author: sorted by title).
  std::vector<std::string> flagged;
};

// original_number -> display_number.
struct RenumberMap {
  std::map<int, int> pairs;

  bool IsBijection(int reference_count) const;
};

// Source-list order.
ReferenceOrder OrderOriginal(const Article& article);

// By first in-text mark in document order; uncited references follow in
// original-number order. Expects split citations.
ReferenceOrder OrderByAppearance(const Article& article);

// Case-folded first-author surname, then year, then case-folded title, then
// original number. References without authors use their title as the
// surname key and are listed in `flagged`.
ReferenceOrder OrderAlphabetical(const Article& article);

ReferenceOrder OrderBy(const Article& article, OrderMode mode);

struct RenumberResult {
  RenumberMap map;
  Article article;
};

// Throws kIncompleteOrder unless order.sequence is a permutation of the
// article's reference ids. Unresolved marks keep their display number.
RenumberResult Renumber(const Article& article, const ReferenceOrder& order);

Json ReferenceOrderToJson(const Article& article, const ReferenceOrder& order,
                          const RenumberMap& map);

}  // namespace scibrowse

#endif  // SCIBROWSE_REFERENCES_H_
