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

#include "scibrowse/navigation.h"

#include "scibrowse/article_json.h"

namespace scibrowse {

std::string_view TocEntryKindName(TocEntryKind kind) {
  switch (kind) {
    case TocEntryKind::kSection: return "section";
    case TocEntryKind::kActivityBlock: return "activity_block";
    case TocEntryKind::kRqBlock: return "rq_block";
    case TocEntryKind::kFrontMatter: return "front_matter";
  }
  return "section";
}

namespace {

TocEntry SectionEntry(const Section& s, std::vector<Warning>* warnings) {
  TocEntry e;
  e.kind = TocEntryKind::kSection;
  e.id = s.id;
  e.section_id = s.id;
  e.level = s.level;
  e.label = s.heading;
  if (e.label.empty()) {
    e.label = std::string(kUntitledLabel);
    if (warnings != nullptr) {
      warnings->push_back(
          {"UntitledSection", "section " + s.id + " has no heading", 0, 0});
    }
  }
  return e;
}

TocEntry* FindEntry(std::vector<TocEntry>& entries, std::string_view id) {
  for (auto& e : entries) {
    if (e.kind == TocEntryKind::kSection && e.id == id) return &e;
    if (TocEntry* hit = FindEntry(e.children, id)) return hit;
  }
  return nullptr;
}

Json EntryToJson(const TocEntry& e) {
  Json j = Json::object();
  j["kind"] = std::string(TocEntryKindName(e.kind));
  j["id"] = e.id;
  j["section_id"] = e.section_id;
  j["level"] = e.level;
  j["label"] = e.label;
  Json targets = Json::array();
  for (const auto& t : e.targets) targets.push_back(SpanToJson(t));
  j["targets"] = std::move(targets);
  j["flagged"] = e.flagged;
  Json children = Json::array();
  for (const auto& c : e.children) children.push_back(EntryToJson(c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

std::vector<TocEntry> BuildToc(const Article& article,
                               std::vector<Warning>* warnings) {
  std::vector<TocEntry> toc;
  for (const auto& top : article.sections) {
    TocEntry e = SectionEntry(top, warnings);
    for (const auto& child : top.children) {
      e.children.push_back(SectionEntry(child, warnings));
    }
    toc.push_back(std::move(e));
  }
  return toc;
}

TocView FisheyeSelect(const std::vector<TocEntry>& toc,
                      const std::optional<std::string>& selected) {
  if (selected) {
    bool found = false;
    for (const auto& e : toc) found = found || e.id == *selected;
    if (!found) {
      throw Error(ErrorCode::kUnknownSection,
                  "'" + *selected + "' is not a top-level TOC entry");
    }
  }
  TocView view;
  view.selected = selected;
  for (const auto& e : toc) {
    const bool is_selected = selected && e.id == *selected;
    view.entries.push_back(
        {e.kind, e.id, e.level, e.label, is_selected, !e.children.empty()});
    if (!is_selected) continue;
    for (const auto& c : e.children) {
      view.entries.push_back(
          {c.kind, c.id, c.level, c.label, false, !c.children.empty()});
    }
  }
  return view;
}

std::vector<TocEntry> ExtendToc(const Article& article,
                                const std::vector<TocEntry>& toc,
                                const std::vector<BlockOutline>& blocks) {
  std::vector<TocEntry> out = toc;
  for (const auto& block : blocks) {
    for (const auto& span : block.spans) {
      if (!SpanResolves(article, span)) {
        throw Error(ErrorCode::kUnknownSpan,
                    "block " + block.id + " has unresolvable span in '" +
                        span.block_id + "'");
      }
    }
    if (!SpanResolves(article, block.goal_span)) {
      throw Error(ErrorCode::kUnknownSpan,
                  "block " + block.id + " goal span does not resolve");
    }

    TocEntry entry;
    entry.kind = block.kind;
    entry.id = block.id;
    entry.label = block.goal_label;
    entry.targets = block.spans;
    if (entry.targets.empty() || entry.targets.front() != block.goal_span) {
      entry.targets.insert(entry.targets.begin(), block.goal_span);
    }

    TocEntry* parent = nullptr;
    if (IsAbstractBlock(article, block.goal_span.block_id)) {
      if (out.empty() || out.front().kind != TocEntryKind::kFrontMatter) {
        TocEntry front;
        front.kind = TocEntryKind::kFrontMatter;
        front.id = std::string(kFrontMatterId);
        front.level = 1;
        front.label = "Front matter";
        front.flagged = true;
        out.insert(out.begin(), std::move(front));
      }
      parent = &out.front();
    } else {
      const auto path = SectionPath(article, block.goal_span.block_id);
      const Section* owner = nullptr;
      for (const Section* s : path) {
        if (s->level <= 2) owner = s;
      }
      if (owner != nullptr) parent = FindEntry(out, owner->id);
      if (parent == nullptr) {
        throw Error(ErrorCode::kUnknownSpan,
                    "no TOC section holds the goal of block " + block.id);
      }
      entry.section_id = owner->id;
    }
    entry.level = parent->level + 1;
    parent->children.push_back(std::move(entry));
  }
  return out;
}

Json TocToJson(const std::vector<TocEntry>& toc) {
  Json j = Json::array();
  for (const auto& e : toc) j.push_back(EntryToJson(e));
  return j;
}

Json TocViewToJson(const TocView& view) {
  Json j = Json::object();
  j["selected"] = view.selected ? Json(*view.selected) : Json(nullptr);
  Json entries = Json::array();
  for (const auto& e : view.entries) {
    Json v = Json::object();
    v["kind"] = std::string(TocEntryKindName(e.kind));
    v["id"] = e.id;
    v["level"] = e.level;
    v["label"] = e.label;
    v["selected"] = e.selected;
    v["has_children"] = e.has_children;
    entries.push_back(std::move(v));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace scibrowse
