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

// Table of contents: the two-level section tree, fisheye expansion of one
// top-level entry, and the tree extended with discourse blocks.

#ifndef SCIBROWSE_NAVIGATION_H_
#define SCIBROWSE_NAVIGATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"
#include "scibrowse/error.h"

namespace scibrowse {

enum class TocEntryKind { kSection, kActivityBlock, kRqBlock, kFrontMatter };

std::string_view TocEntryKindName(TocEntryKind kind);

inline constexpr std::string_view kFrontMatterId = "front";
inline constexpr std::string_view kUntitledLabel = "(untitled)";

struct TocEntry {
  TocEntryKind kind = TocEntryKind::kSection;
  // Section id, block id, or kFrontMatterId.
  std::string id;
  // Section that owns the entry; empty for front matter.
  std::string section_id;
  int level = 1;
  std::string label;
  // Scroll targets of a block entry (goal span first). Empty for sections,
  // whose target is the section itself.
  std::vector<Span> targets;
  // Set on synthetic front-matter entries.
  bool flagged = false;
  std::vector<TocEntry> children;

  bool operator==(const TocEntry&) const = default;
};

struct VisibleTocEntry {
  TocEntryKind kind = TocEntryKind::kSection;
  std::string id;
  int level = 1;
  std::string label;
  bool selected = false;
  bool has_children = false;

  bool operator==(const VisibleTocEntry&) const = default;
};

struct TocView {
  std::vector<VisibleTocEntry> entries;
  std::optional<std::string> selected;
};

// Summary of a discourse block as the TOC sees it. Produced by
// discourse_blocks::ListBlocks.
struct BlockOutline {
  std::string id;
  TocEntryKind kind = TocEntryKind::kActivityBlock;
  std::string goal_label;
  Span goal_span;
  std::vector<Span> spans;  // every span of the block, goal first
};

// Level-1 and level-2 sections in document order. Untitled sections are
// labelled kUntitledLabel and reported through `warnings`.
std::vector<TocEntry> BuildToc(const Article& article,
                               std::vector<Warning>* warnings = nullptr);

// Visible list: every level-1 entry, with the children of `selected`
// inserted right after it. Throws kUnknownSection unless `selected` names a
// level-1 entry.
TocView FisheyeSelect(const std::vector<TocEntry>& toc,
                      const std::optional<std::string>& selected);

// Adds one child entry per block under the TOC section containing its goal
// span (the nearest level-1/level-2 ancestor). Goals in the abstract go
// under a synthetic, flagged "Front matter" entry. Original entries keep
// their order. Throws kUnknownSpan.
std::vector<TocEntry> ExtendToc(const Article& article,
                                const std::vector<TocEntry>& toc,
                                const std::vector<BlockOutline>& blocks);

Json TocToJson(const std::vector<TocEntry>& toc);
Json TocViewToJson(const TocView& view);

}  // namespace scibrowse

#endif  // SCIBROWSE_NAVIGATION_H_
