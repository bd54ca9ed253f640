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

// The segmented document model shared by every other module.
//
// Ids are stable across sessions: sections are "s1", "s1.2"; blocks are
// "s1.2/b3" (abstract blocks "abs/b0"); citation marks are "s1.2/b3/c0", and
// marks produced by splitting a grouped mark append ".k" to its id.
//
// Document order is: abstract blocks, then sections depth-first (a section's
// own blocks before its children), and marks by offset within a block.

#ifndef SCIBROWSE_ARTICLE_H_
#define SCIBROWSE_ARTICLE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scibrowse {

// Offsets are code points into ContentBlock::text; end is exclusive.
struct Span {
  std::string block_id;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct InlineCitationMark {
  std::string id;
  Span span;
  std::vector<std::string> target_ref_ids;
  int display_number = 0;
  bool resolved = true;

  bool operator==(const InlineCitationMark&) const = default;
};

enum class BlockKind { kParagraph, kFigure, kTable };

struct ContentBlock {
  std::string id;
  BlockKind kind = BlockKind::kParagraph;
  std::string text;  // caption text for figures and tables
  std::vector<InlineCitationMark> marks;
  std::vector<std::vector<std::string>> cells;  // tables only

  bool operator==(const ContentBlock&) const = default;
};

struct Section {
  std::string id;
  int level = 1;
  std::string heading;
  bool deep = false;  // level > 2
  std::vector<ContentBlock> blocks;
  std::vector<Section> children;

  bool operator==(const Section&) const = default;
};

struct PersonName {
  std::string surname;
  std::string given;
  // False when the source had no surname/given split (collab names, string
  // names); the whole string is then in surname.
  bool structured = true;

  bool operator==(const PersonName&) const = default;
};

struct Reference {
  std::string id;
  int original_number = 0;  // 1-based position in the source list
  std::string label;
  std::vector<PersonName> authors;
  std::string year;
  std::string title;
  std::string source_venue;
  std::optional<std::string> doi;

  bool operator==(const Reference&) const = default;
};

struct SourceDescriptor {
  std::string article_id;
  std::string format_tag = "jats_xml";
  uint64_t byte_length = 0;
  std::string checksum;  // FNV-1a 64, hex

  bool operator==(const SourceDescriptor&) const = default;
};

struct Article {
  std::string id;
  std::string title;
  std::vector<PersonName> authors;
  std::vector<ContentBlock> abstract;
  std::vector<Section> sections;
  std::vector<Reference> references;
  std::vector<std::string> figures;  // block ids of figure/table blocks
  SourceDescriptor provenance;

  bool operator==(const Article&) const = default;
};

std::string_view BlockKindName(BlockKind kind);
std::optional<BlockKind> ParseBlockKind(std::string_view name);

// Lookup helpers. The throwing variants raise Error(kUnknownBlock).
const ContentBlock* FindBlock(const Article& article, std::string_view block_id);
const ContentBlock& GetBlock(const Article& article, std::string_view block_id);
const Section* FindSection(const Article& article, std::string_view section_id);
const Reference* FindReference(const Article& article, std::string_view ref_id);
const InlineCitationMark* FindMark(const Article& article,
                                   std::string_view mark_id);

bool IsAbstractBlock(const Article& article, std::string_view block_id);

// Exact substring of the block text. Throws kUnknownBlock or kOutOfRange.
std::string ResolveSpan(const Article& article, const Span& span);
bool SpanResolves(const Article& article, const Span& span);

// Innermost section containing the block. Throws kUnknownBlock (also for
// abstract blocks, which belong to no section).
const Section& SectionOf(const Article& article, std::string_view block_id);

// Chain of sections from the level-1 ancestor down to the innermost one.
std::vector<const Section*> SectionPath(const Article& article,
                                        std::string_view block_id);

// Position of a block in document order; nullopt if unknown.
std::optional<size_t> BlockPosition(const Article& article,
                                    std::string_view block_id);

// Strict weak order on spans by document position, then start, then end.
bool SpanBefore(const Article& article, const Span& a, const Span& b);

// Visitors in document order.
void ForEachBlock(const Article& article,
                  const std::function<void(const ContentBlock&)>& fn);
void ForEachSection(const Article& article,
                    const std::function<void(const Section&)>& fn);

size_t CountSections(const Article& article);
size_t CountMarks(const Article& article);

}  // namespace scibrowse

#endif  // SCIBROWSE_ARTICLE_H_
