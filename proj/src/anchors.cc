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

#include "scibrowse/anchors.h"

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>
#include <tuple>

#include "scibrowse/article_json.h"

namespace scibrowse {

std::string_view Name(SummaryEntryKind v) {
  switch (v) {
    case SummaryEntryKind::kFirstIntroduction: return "first_introduction";
    case SummaryEntryKind::kLaterMention: return "later_mention";
    case SummaryEntryKind::kRelatedFlow: return "related_flow";
    case SummaryEntryKind::kRelatedBlock: return "related_block";
    case SummaryEntryKind::kAbstractPresence: return "abstract_presence";
  }
  return "later_mention";
}

bool TargetResolves(const ArticleStore& store, const AnchorTarget& target) {
  if (const auto* span = std::get_if<Span>(&target)) {
    return SpanResolves(store.article, *span);
  }
  const auto& id = std::get<std::string>(target);
  return store.kb.KindOf(id).has_value() || store.blocks.Contains(id);
}

namespace {

const ArticleStore& RequireStore(const StoreLookup& stores,
                                 const std::string& article_id) {
  const ArticleStore* store = stores ? stores(article_id) : nullptr;
  if (store == nullptr) {
    throw Error(ErrorCode::kUnknownArticle, "unknown article '" + article_id + "'");
  }
  return *store;
}

auto SpanKey(const Article& article, const Span& s) {
  return std::make_tuple(BlockPosition(article, s.block_id).value_or(SIZE_MAX),
                         s.start, s.end);
}

bool Overlaps(const Span& a, const Span& b) {
  if (a.block_id != b.block_id) return false;
  if (a.start == a.end || b.start == b.end) {
    // An empty span touches the spans around its position.
    return a.start <= b.end && b.start <= a.end;
  }
  return std::max(a.start, b.start) < std::min(a.end, b.end);
}

bool FlowReferences(const Flow& flow, const std::string& id) {
  if (flow.id == id || flow.refines == id) return true;
  for (const auto& p : flow.participants) {
    if (p.entity == id) return true;
  }
  for (const auto& t : flow.triggers) {
    if (t.subject == id || t.near == id) return true;
  }
  for (const auto& e : flow.effects) {
    if (const auto* sc = std::get_if<StateChange>(&e)) {
      if (sc->entity == id) return true;
    } else if (std::get<EntityCreation>(e).entity == id) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string AnchorIndex::NewId(std::string_view prefix) {
  for (;;) {
    std::string id = std::string(prefix) + "-" + std::to_string(next_sequence_++);
    if (!anchors_.contains(id) && !links_.contains(id)) return id;
  }
}

const Anchor* AnchorIndex::FindAnchor(const std::string& id) const {
  auto it = anchors_.find(id);
  return it == anchors_.end() ? nullptr : &it->second;
}

void AnchorIndex::AddRole(const std::string& role) {
  if (role.empty()) throw Error(ErrorCode::kInvalidArgument, "empty role");
  if (std::find(roles_.begin(), roles_.end(), role) == roles_.end()) {
    roles_.push_back(role);
  }
}

const Anchor& AnchorIndex::RegisterAnchor(const StoreLookup& stores,
                                          std::string article_id,
                                          AnchorTarget target,
                                          std::string topic_label,
                                          std::string id) {
  const ArticleStore& store = RequireStore(stores, article_id);
  if (!TargetResolves(store, target)) {
    throw Error(ErrorCode::kUnknownTarget,
                "anchor target does not resolve in '" + article_id + "'");
  }
  if (!id.empty() && (anchors_.contains(id) || links_.contains(id))) {
    throw Error(ErrorCode::kDuplicateId, "id '" + id + "' is already used");
  }
  Anchor a{id.empty() ? NewId("anchor") : std::move(id), std::move(article_id),
           std::move(target), std::move(topic_label)};
  std::string key = a.id;
  return anchors_.emplace(std::move(key), std::move(a)).first->second;
}

void AnchorIndex::AddMention(const StoreLookup& stores,
                             const std::string& anchor_id, const Span& span) {
  const Anchor* anchor = FindAnchor(anchor_id);
  if (anchor == nullptr) {
    throw Error(ErrorCode::kUnknownAnchor, "unknown anchor '" + anchor_id + "'");
  }
  const ArticleStore& store = RequireStore(stores, anchor->article_id);
  if (!SpanResolves(store.article, span)) {
    throw Error(ErrorCode::kUnknownSpan,
                "mention span in '" + span.block_id + "' does not resolve");
  }
  Mention m{anchor_id, span};
  if (std::find(mentions_.begin(), mentions_.end(), m) == mentions_.end()) {
    mentions_.push_back(std::move(m));
  }
}

const CitationLink& AnchorIndex::LinkCitation(const StoreLookup& stores,
                                              const std::string& citing_article_id,
                                              const std::string& mark_id,
                                              const std::string& anchor_id,
                                              const std::string& role,
                                              std::string id) {
  const ArticleStore& citing = RequireStore(stores, citing_article_id);
  if (FindMark(citing.article, mark_id) == nullptr) {
    throw Error(ErrorCode::kUnknownMark, "unknown mark '" + mark_id + "' in '" +
                                             citing_article_id + "'");
  }
  if (FindAnchor(anchor_id) == nullptr) {
    throw Error(ErrorCode::kUnknownAnchor, "unknown anchor '" + anchor_id + "'");
  }
  if (std::find(roles_.begin(), roles_.end(), role) == roles_.end()) {
    throw Error(ErrorCode::kUnknownRole, "role '" + role + "' is not configured");
  }
  for (const auto& [lid, link] : links_) {
    if (link.citing_article_id == citing_article_id &&
        link.citing_mark_id == mark_id && link.anchor_id == anchor_id) {
      return link;
    }
  }
  if (!id.empty() && (anchors_.contains(id) || links_.contains(id))) {
    throw Error(ErrorCode::kDuplicateId, "id '" + id + "' is already used");
  }
  CitationLink link{id.empty() ? NewId("link") : std::move(id), citing_article_id,
                    mark_id, anchor_id, role};
  std::string key = link.id;
  return links_.emplace(std::move(key), std::move(link)).first->second;
}

ContextSummary AnchorIndex::Summarize(const StoreLookup& stores,
                                      const std::string& anchor_id) const {
  const Anchor* anchor = FindAnchor(anchor_id);
  if (anchor == nullptr) {
    throw Error(ErrorCode::kUnknownAnchor, "unknown anchor '" + anchor_id + "'");
  }
  const ArticleStore& store = RequireStore(stores, anchor->article_id);
  const Article& article = store.article;

  ContextSummary summary;
  summary.anchor_id = anchor->id;
  summary.article_id = anchor->article_id;
  summary.topic_label = anchor->topic_label;

  // Textual mentions: annotations plus a span target, deduplicated.
  std::vector<Span> spans;
  if (const auto* target = std::get_if<Span>(&anchor->target)) {
    spans.push_back(*target);
  }
  for (const auto& m : mentions_) {
    if (m.anchor_id == anchor->id) spans.push_back(m.span);
  }
  std::erase_if(spans, [&](const Span& s) { return !SpanResolves(article, s); });
  std::sort(spans.begin(), spans.end(), [&](const Span& a, const Span& b) {
    return SpanKey(article, a) < SpanKey(article, b);
  });
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  for (size_t i = 0; i < spans.size(); ++i) {
    SummaryEntry e;
    e.kind = i == 0 ? SummaryEntryKind::kFirstIntroduction
                    : SummaryEntryKind::kLaterMention;
    e.span = spans[i];
    e.excerpt = ResolveSpan(article, spans[i]);
    summary.entries.push_back(std::move(e));
  }

  // Related blocks: blocks overlapping a mention or naming the target.
  const std::string* element = std::get_if<std::string>(&anchor->target);
  std::set<std::string> flow_ids;
  if (element != nullptr) {
    for (const auto& [id, flow] : store.kb.flows()) {
      if (FlowReferences(flow, *element)) flow_ids.insert(id);
    }
  }
  std::vector<BlockOutline> related_blocks;
  for (const auto& outline : store.blocks.ListBlocks(article)) {
    const ActivityBlock* ab = store.blocks.FindActivity(outline.id);
    bool related = element != nullptr && outline.id == *element;
    for (const auto& bs : outline.spans) {
      for (const auto& s : spans) related = related || Overlaps(bs, s);
    }
    if (ab != nullptr && element != nullptr) {
      for (const auto& f : ab->method_flow_ids) related = related || f == *element;
    }
    if (!related) continue;
    if (ab != nullptr) {
      flow_ids.insert(ab->method_flow_ids.begin(), ab->method_flow_ids.end());
    }
    related_blocks.push_back(outline);
  }
  for (const auto& id : flow_ids) {
    const Flow* flow = store.kb.FindFlow(id);
    if (flow == nullptr) continue;
    SummaryEntry e;
    e.kind = SummaryEntryKind::kRelatedFlow;
    e.element = id;
    e.excerpt = flow->name;
    summary.entries.push_back(std::move(e));
  }
  for (const auto& outline : related_blocks) {
    SummaryEntry e;
    e.kind = SummaryEntryKind::kRelatedBlock;
    e.element = outline.id;
    if (SpanResolves(article, outline.goal_span)) {
      e.span = outline.goal_span;
      e.excerpt = ResolveSpan(article, outline.goal_span);
    }
    summary.entries.push_back(std::move(e));
  }

  SummaryEntry presence;
  presence.kind = SummaryEntryKind::kAbstractPresence;
  for (const auto& s : spans) {
    if (IsAbstractBlock(article, s.block_id)) {
      presence.present = true;
      presence.span = s;
      presence.excerpt = ResolveSpan(article, s);
      break;
    }
  }
  summary.entries.push_back(std::move(presence));
  return summary;
}

std::vector<CitationLink> AnchorIndex::Backlinks(
    const StoreLookup& stores, const std::string& article_id) const {
  struct Keyed {
    std::tuple<std::string, size_t, size_t, std::string> key;
    CitationLink link;
  };
  std::vector<Keyed> keyed;
  for (const auto& [id, link] : links_) {
    const Anchor* anchor = FindAnchor(link.anchor_id);
    if (anchor == nullptr || anchor->article_id != article_id) continue;
    size_t block = SIZE_MAX, start = SIZE_MAX;
    if (const ArticleStore* citing = stores ? stores(link.citing_article_id)
                                            : nullptr) {
      if (const auto* mark = FindMark(citing->article, link.citing_mark_id)) {
        block = BlockPosition(citing->article, mark->span.block_id)
                    .value_or(SIZE_MAX);
        start = mark->span.start;
      }
    }
    keyed.push_back({{link.citing_article_id, block, start, link.citing_mark_id},
                     link});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.key, a.link.id) < std::tie(b.key, b.link.id);
  });
  std::vector<CitationLink> out;
  for (auto& k : keyed) out.push_back(std::move(k.link));
  return out;
}

std::string AnchorIndex::ExportLinks() const {
  std::string out;
  for (const auto& [id, link] : links_) {
    out += CompactDump(scibrowse::ToJson(link));
    out += '\n';
  }
  return out;
}

size_t AnchorIndex::ImportLinks(const StoreLookup& stores, std::string_view jsonl) {
  AnchorIndex staged = *this;
  size_t added = 0;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "links:" + std::to_string(line_no);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kCorruptStore, where + ": not JSON");
    }
    CitationLink link = CitationLinkFromJson(j, where);
    // A link already known under another id keeps the local id.
    const size_t before = staged.links_.size();
    staged.LinkCitation(stores, link.citing_article_id, link.citing_mark_id,
                        link.anchor_id, link.role, link.id);
    if (staged.links_.size() > before) ++added;
  }
  *this = std::move(staged);
  return added;
}

// ---- JSON

namespace {

void TargetToJson(const AnchorTarget& target, Json& j) {
  if (const auto* span = std::get_if<Span>(&target)) {
    j["target_span"] = SpanToJson(*span);
    j["target_element"] = nullptr;
  } else {
    j["target_span"] = nullptr;
    j["target_element"] = std::get<std::string>(target);
  }
}

}  // namespace

Json ToJson(const Anchor& a) {
  Json j = Json::object();
  j["id"] = a.id;
  j["article_id"] = a.article_id;
  TargetToJson(a.target, j);
  j["topic_label"] = a.topic_label;
  return j;
}

Json ToJson(const CitationLink& l) {
  Json j = Json::object();
  j["id"] = l.id;
  j["citing_article_id"] = l.citing_article_id;
  j["citing_mark_id"] = l.citing_mark_id;
  j["anchor_id"] = l.anchor_id;
  j["role"] = l.role;
  return j;
}

Json ToJson(const ContextSummary& s) {
  Json j = Json::object();
  j["anchor_id"] = s.anchor_id;
  j["article_id"] = s.article_id;
  j["topic_label"] = s.topic_label;
  Json entries = Json::array();
  for (const auto& e : s.entries) {
    Json ej = Json::object();
    ej["kind"] = std::string(Name(e.kind));
    ej["span"] = e.span ? SpanToJson(*e.span) : Json(nullptr);
    ej["element"] = e.element;
    ej["excerpt"] = e.excerpt;
    if (e.kind == SummaryEntryKind::kAbstractPresence) ej["present"] = e.present;
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

Anchor AnchorFromJson(const Json& j, std::string_view where) {
  Anchor a;
  a.id = RequireString(j, "id", where);
  a.article_id = RequireString(j, "article_id", where);
  auto span = j.find("target_span");
  if (span != j.end() && !span->is_null()) {
    a.target = SpanFromJson(*span, std::string(where) + "/target_span");
  } else {
    a.target = RequireString(j, "target_element", where);
  }
  a.topic_label = OptionalString(j, "topic_label", where);
  return a;
}

CitationLink CitationLinkFromJson(const Json& j, std::string_view where) {
  CitationLink l;
  l.id = OptionalString(j, "id", where);
  l.citing_article_id = RequireString(j, "citing_article_id", where);
  l.citing_mark_id = RequireString(j, "citing_mark_id", where);
  l.anchor_id = RequireString(j, "anchor_id", where);
  l.role = RequireString(j, "role", where);
  return l;
}

Json AnchorIndex::ToJson() const {
  Json j = Json::object();
  j["next_sequence"] = next_sequence_;
  Json roles = Json::array();
  for (const auto& r : roles_) roles.push_back(r);
  j["roles"] = std::move(roles);
  Json anchors = Json::array();
  for (const auto& [id, a] : anchors_) anchors.push_back(scibrowse::ToJson(a));
  j["anchors"] = std::move(anchors);
  Json mentions = Json::array();
  for (const auto& m : mentions_) {
    Json mj = Json::object();
    mj["anchor_id"] = m.anchor_id;
    mj["span"] = SpanToJson(m.span);
    mentions.push_back(std::move(mj));
  }
  j["mentions"] = std::move(mentions);
  Json links = Json::array();
  for (const auto& [id, l] : links_) links.push_back(scibrowse::ToJson(l));
  j["links"] = std::move(links);
  return j;
}

AnchorIndex AnchorIndex::FromJson(const Json& j) {
  const std::string where = "anchors";
  AnchorIndex index{std::vector<std::string>{}};
  index.next_sequence_ =
      static_cast<uint64_t>(RequireInt(j, "next_sequence", where));
  for (const auto& r : RequireArray(j, "roles", where)) {
    if (!r.is_string()) {
      throw Error(ErrorCode::kCorruptStore, where + "/roles: expected string");
    }
    index.roles_.push_back(r.get<std::string>());
  }
  const Json& anchors = RequireArray(j, "anchors", where);
  for (size_t i = 0; i < anchors.size(); ++i) {
    const std::string w = where + "/anchors/" + std::to_string(i);
    Anchor a = AnchorFromJson(anchors[i], w);
    std::string id = a.id;
    if (!index.anchors_.emplace(id, std::move(a)).second) {
      throw Error(ErrorCode::kCorruptStore, w + ": duplicate id");
    }
  }
  const Json& mentions = RequireArray(j, "mentions", where);
  for (size_t i = 0; i < mentions.size(); ++i) {
    const std::string w = where + "/mentions/" + std::to_string(i);
    index.mentions_.push_back(
        {RequireString(mentions[i], "anchor_id", w),
         SpanFromJson(RequireField(mentions[i], "span", w), w + "/span")});
  }
  const Json& links = RequireArray(j, "links", where);
  for (size_t i = 0; i < links.size(); ++i) {
    const std::string w = where + "/links/" + std::to_string(i);
    CitationLink l = CitationLinkFromJson(links[i], w);
    std::string id = l.id;
    if (id.empty() || index.anchors_.contains(id) ||
        !index.links_.emplace(id, std::move(l)).second) {
      throw Error(ErrorCode::kCorruptStore, w + ": missing or duplicate id");
    }
  }
  return index;
}

}  // namespace scibrowse
