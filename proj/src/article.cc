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

#include "scibrowse/article.h"

#include "scibrowse/error.h"
#include "scibrowse/utf8.h"

namespace scibrowse {

std::string_view BlockKindName(BlockKind kind) {
  switch (kind) {
    case BlockKind::kParagraph: return "paragraph";
    case BlockKind::kFigure: return "figure";
    case BlockKind::kTable: return "table";
  }
  return "paragraph";
}

std::optional<BlockKind> ParseBlockKind(std::string_view name) {
  if (name == "paragraph") return BlockKind::kParagraph;
  if (name == "figure") return BlockKind::kFigure;
  if (name == "table") return BlockKind::kTable;
  return std::nullopt;
}

namespace {

void VisitSections(const std::vector<Section>& sections,
                   const std::function<void(const Section&)>& fn) {
  for (const auto& s : sections) {
    fn(s);
    VisitSections(s.children, fn);
  }
}

// Depth-first search for the section path owning a block.
bool FindPath(const std::vector<Section>& sections, std::string_view block_id,
              std::vector<const Section*>& path) {
  for (const auto& s : sections) {
    path.push_back(&s);
    for (const auto& b : s.blocks) {
      if (b.id == block_id) return true;
    }
    if (FindPath(s.children, block_id, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

void ForEachSection(const Article& article,
                    const std::function<void(const Section&)>& fn) {
  VisitSections(article.sections, fn);
}

void ForEachBlock(const Article& article,
                  const std::function<void(const ContentBlock&)>& fn) {
  for (const auto& b : article.abstract) fn(b);
  ForEachSection(article, [&](const Section& s) {
    for (const auto& b : s.blocks) fn(b);
  });
}

const ContentBlock* FindBlock(const Article& article,
                              std::string_view block_id) {
  for (const auto& b : article.abstract) {
    if (b.id == block_id) return &b;
  }
  std::vector<const Section*> path;
  if (!FindPath(article.sections, block_id, path)) return nullptr;
  for (const auto& b : path.back()->blocks) {
    if (b.id == block_id) return &b;
  }
  return nullptr;
}

const ContentBlock& GetBlock(const Article& article,
                             std::string_view block_id) {
  const ContentBlock* b = FindBlock(article, block_id);
  if (b == nullptr) {
    throw Error(ErrorCode::kUnknownBlock,
                "unknown block '" + std::string(block_id) + "'");
  }
  return *b;
}

const Section* FindSection(const Article& article,
                           std::string_view section_id) {
  const Section* hit = nullptr;
  ForEachSection(article, [&](const Section& s) {
    if (hit == nullptr && s.id == section_id) hit = &s;
  });
  return hit;
}

const Reference* FindReference(const Article& article,
                               std::string_view ref_id) {
  for (const auto& r : article.references) {
    if (r.id == ref_id) return &r;
  }
  return nullptr;
}

const InlineCitationMark* FindMark(const Article& article,
                                   std::string_view mark_id) {
  // Mark ids extend their block id, so the block can be located first.
  const size_t cut = mark_id.rfind("/c");
  if (cut != std::string_view::npos) {
    if (const ContentBlock* b = FindBlock(article, mark_id.substr(0, cut))) {
      for (const auto& m : b->marks) {
        if (m.id == mark_id) return &m;
      }
    }
  }
  const InlineCitationMark* hit = nullptr;
  ForEachBlock(article, [&](const ContentBlock& b) {
    for (const auto& m : b.marks) {
      if (hit == nullptr && m.id == mark_id) hit = &m;
    }
  });
  return hit;
}

bool IsAbstractBlock(const Article& article, std::string_view block_id) {
  for (const auto& b : article.abstract) {
    if (b.id == block_id) return true;
  }
  return false;
}

std::string ResolveSpan(const Article& article, const Span& span) {
  const ContentBlock& b = GetBlock(article, span.block_id);
  auto s = utf8::Substr(b.text, span.start, span.end);
  if (!s) {
    throw Error(ErrorCode::kOutOfRange,
                "span [" + std::to_string(span.start) + "," +
                    std::to_string(span.end) + ") outside block '" +
                    span.block_id + "' of length " +
                    std::to_string(utf8::Length(b.text)));
  }
  return *s;
}

bool SpanResolves(const Article& article, const Span& span) {
  const ContentBlock* b = FindBlock(article, span.block_id);
  return b != nullptr && span.start <= span.end &&
         span.end <= utf8::Length(b->text);
}

const Section& SectionOf(const Article& article, std::string_view block_id) {
  std::vector<const Section*> path;
  if (!FindPath(article.sections, block_id, path)) {
    throw Error(ErrorCode::kUnknownBlock,
                "block '" + std::string(block_id) + "' is in no section");
  }
  return *path.back();
}

std::vector<const Section*> SectionPath(const Article& article,
                                        std::string_view block_id) {
  std::vector<const Section*> path;
  if (!FindPath(article.sections, block_id, path)) path.clear();
  return path;
}

std::optional<size_t> BlockPosition(const Article& article,
                                    std::string_view block_id) {
  std::optional<size_t> pos;
  size_t i = 0;
  ForEachBlock(article, [&](const ContentBlock& b) {
    if (!pos && b.id == block_id) pos = i;
    ++i;
  });
  return pos;
}

bool SpanBefore(const Article& article, const Span& a, const Span& b) {
  const size_t pa = BlockPosition(article, a.block_id).value_or(SIZE_MAX);
  const size_t pb = BlockPosition(article, b.block_id).value_or(SIZE_MAX);
  if (pa != pb) return pa < pb;
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

size_t CountSections(const Article& article) {
  size_t n = 0;
  ForEachSection(article, [&](const Section&) { ++n; });
  return n;
}

size_t CountMarks(const Article& article) {
  size_t n = 0;
  ForEachBlock(article, [&](const ContentBlock& b) { n += b.marks.size(); });
  return n;
}

}  // namespace scibrowse
