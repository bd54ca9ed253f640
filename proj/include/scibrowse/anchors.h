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

// Citation anchors: precise targets inside an article (a text span or a
// knowledgebase element) that citations in other articles can link to, and
// the context summaries shown for them.
//
// Mentions of an anchor's topic are curated annotations, never found by
// string search. A summary lists, in order: the first mention, the later
// mentions in document order, the flows and blocks related to the target,
// and an explicit statement of whether the topic is mentioned in the
// abstract.

#ifndef SCIBROWSE_ANCHORS_H_
#define SCIBROWSE_ANCHORS_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scibrowse/article_store.h"
#include "scibrowse/canonical_json.h"

namespace scibrowse {

using AnchorTarget = std::variant<Span, std::string>;  // span or element id

struct Anchor {
  std::string id;
  std::string article_id;
  AnchorTarget target;
  std::string topic_label;

  bool operator==(const Anchor&) const = default;
};

struct Mention {
  std::string anchor_id;
  Span span;

  bool operator==(const Mention&) const = default;
};

struct CitationLink {
  std::string id;
  std::string citing_article_id;
  std::string citing_mark_id;
  std::string anchor_id;
  std::string role;

  bool operator==(const CitationLink&) const = default;
};

enum class SummaryEntryKind {
  kFirstIntroduction,
  kLaterMention,
  kRelatedFlow,
  kRelatedBlock,
  kAbstractPresence,
};

std::string_view Name(SummaryEntryKind v);

struct SummaryEntry {
  SummaryEntryKind kind = SummaryEntryKind::kFirstIntroduction;
  std::optional<Span> span;
  std::string element;  // flow or block id for related entries
  // Exact span text; flow name for flows; empty for an absent abstract.
  std::string excerpt;
  bool present = false;  // abstract_presence only

  bool operator==(const SummaryEntry&) const = default;
};

struct ContextSummary {
  std::string anchor_id;
  std::string article_id;
  std::string topic_label;
  std::vector<SummaryEntry> entries;

  bool operator==(const ContextSummary&) const = default;
};

inline const std::vector<std::string>& DefaultCitationRoles() {
  static const std::vector<std::string> kRoles = {
      "cites_as_evidence", "uses_method", "extends", "discusses"};
  return kRoles;
}

// Resolves an article id to its store, or null.
using StoreLookup = std::function<const ArticleStore*(const std::string&)>;

class AnchorIndex {
 public:
  explicit AnchorIndex(std::vector<std::string> roles = DefaultCitationRoles())
      : roles_(std::move(roles)) {}

  // Throws kUnknownArticle, kUnknownTarget, kDuplicateId.
  const Anchor& RegisterAnchor(const StoreLookup& stores, std::string article_id,
                               AnchorTarget target, std::string topic_label,
                               std::string id = "");

  // Annotates a span of the anchor's article as a mention of its topic.
  // Repeated annotations are ignored. Throws kUnknownAnchor, kUnknownSpan.
  void AddMention(const StoreLookup& stores, const std::string& anchor_id,
                  const Span& span);

  // Idempotent per (citing article, mark, anchor): a repeated link returns
  // the existing record. Throws kUnknownArticle, kUnknownMark,
  // kUnknownAnchor, kUnknownRole, kDuplicateId.
  const CitationLink& LinkCitation(const StoreLookup& stores,
                                   const std::string& citing_article_id,
                                   const std::string& mark_id,
                                   const std::string& anchor_id,
                                   const std::string& role, std::string id = "");

  // Throws kUnknownAnchor, kUnknownArticle.
  ContextSummary Summarize(const StoreLookup& stores,
                           const std::string& anchor_id) const;

  // Links into anchors of `article_id`, by citing article then mark
  // position.
  std::vector<CitationLink> Backlinks(const StoreLookup& stores,
                                      const std::string& article_id) const;

  // Links as JSON lines, ordered by id.
  std::string ExportLinks() const;
  // Imports JSON lines; returns the number of new links. Each line is
  // validated like LinkCitation; the first bad line throws and nothing is
  // imported.
  size_t ImportLinks(const StoreLookup& stores, std::string_view jsonl);

  void AddRole(const std::string& role);
  const std::vector<std::string>& roles() const { return roles_; }
  const std::map<std::string, Anchor>& anchors() const { return anchors_; }
  const std::vector<Mention>& mentions() const { return mentions_; }
  const std::map<std::string, CitationLink>& links() const { return links_; }
  const Anchor* FindAnchor(const std::string& id) const;

  Json ToJson() const;
  static AnchorIndex FromJson(const Json& j);

  bool operator==(const AnchorIndex&) const = default;

 private:
  std::string NewId(std::string_view prefix);

  std::vector<std::string> roles_;
  std::map<std::string, Anchor> anchors_;
  std::vector<Mention> mentions_;
  std::map<std::string, CitationLink> links_;
  uint64_t next_sequence_ = 1;
};

// True when the target resolves in the store: a span of the article, a
// knowledgebase element or a block id.
bool TargetResolves(const ArticleStore& store, const AnchorTarget& target);

Json ToJson(const Anchor& anchor);
Json ToJson(const CitationLink& link);
Json ToJson(const ContextSummary& summary);
Anchor AnchorFromJson(const Json& j, std::string_view where);
CitationLink CitationLinkFromJson(const Json& j, std::string_view where);

}  // namespace scibrowse

#endif  // SCIBROWSE_ANCHORS_H_
