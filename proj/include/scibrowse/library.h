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

// A library of ingested articles kept as plain JSON files:
//
//   <root>/library.json                  format tag and article ids
//   <root>/shared.json                   shared knowledgebase (instruments,
//                                        shared classes) and anchor index
//   <root>/articles/<id>/article.json    segmented article
//   <root>/articles/<id>/kb.json         knowledgebase and blocks
//   <root>/commands.log                  every successful mutation, one
//                                        JSON object per line
//
// Article ids are percent-encoded in directory names. Replaying the command
// log into an empty library reproduces the files byte for byte.
//
// Library is not synchronized; the service wraps it in a reader/writer
// lock.

#ifndef SCIBROWSE_LIBRARY_H_
#define SCIBROWSE_LIBRARY_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scibrowse/anchors.h"
#include "scibrowse/article_store.h"
#include "scibrowse/canonical_json.h"
#include "scibrowse/ingest.h"

namespace scibrowse {

inline constexpr std::string_view kSharedStoreId = "shared";

struct ClusterMember {
  std::string article_id;
  std::string flow_id;

  bool operator==(const ClusterMember&) const = default;
  auto operator<=>(const ClusterMember&) const = default;
};

struct InstrumentUsageCluster {
  std::string instrument_id;
  // Method-flow signature -> flows that used the instrument.
  std::map<std::string, std::vector<ClusterMember>> groups;
};

struct StateConflict {
  std::string class_name;
  std::string dimension;
  struct Declaration {
    std::string store;  // article id or "shared"
    std::string class_id;
    std::vector<std::string> states;
  };
  std::vector<Declaration> declarations;
};

struct DanglingRef {
  std::string kind;  // anchor, mention, link, dataset_instrument
  std::string id;
  std::string store;
  std::string detail;
};

struct LintReport {
  std::vector<StateConflict> conflicts;
  std::vector<DanglingRef> dangling;

  bool empty() const { return conflicts.empty() && dangling.empty(); }
};

// "<flow name>(<role>:<class>,...)" over participants in order; systems
// appear under their own id.
std::string MethodSignature(const KnowledgeBase& kb, const Flow& flow);

std::string EncodePathSegment(std::string_view id);

class Library {
 public:
  Library() = default;

  // Reads a library directory. A missing or empty directory gives an empty
  // library. Throws kCorruptStore naming the file, or kIo.
  static Library Load(const std::filesystem::path& root);
  // Writes every file, replacing the previous contents. Throws kIo.
  void Save(const std::filesystem::path& root) const;

  // Rebuilds a library from command log lines.
  static Library Replay(std::string_view command_log);

  // ---- mutations; each successful one is appended to the command log.

  // Parses, splits grouped citations and stores. Re-ingesting an identical
  // article is a no-op; a different article under a stored id is
  // kDuplicateId.
  IngestReport IngestXml(const std::string& bytes, const std::string& name_hint);

  // Applies a batch to an article store or, for kSharedStoreId, the shared
  // knowledgebase. All or nothing. Returns one result per command.
  Json ApplyCommands(const std::string& store_id, const Json& commands);

  const Anchor& RegisterAnchor(const std::string& article_id,
                               const AnchorTarget& target,
                               const std::string& topic_label,
                               const std::string& id = "");
  void AddMention(const std::string& anchor_id, const Span& span);
  const CitationLink& LinkCitation(const std::string& citing_article_id,
                                   const std::string& mark_id,
                                   const std::string& anchor_id,
                                   const std::string& role);
  size_t ImportLinks(std::string_view jsonl);
  void AddRole(const std::string& role);

  // Throws kUnknownArticle. Anchors and links into the article are left in
  // place and reported by the lint.
  void RemoveArticle(const std::string& article_id);

  // ---- reads

  std::vector<std::string> ArticleIds() const;
  const ArticleStore* FindArticle(const std::string& id) const;
  // Throws kUnknownArticle.
  const ArticleStore& GetArticle(const std::string& id) const;
  const KnowledgeBase& shared_kb() const { return shared_kb_; }
  const AnchorIndex& anchors() const { return anchors_; }
  StoreLookup Lookup() const;

  ContextSummary Summarize(const std::string& anchor_id) const;
  std::vector<CitationLink> Backlinks(const std::string& article_id) const;

  // Throws kUnknownInstrument unless the shared store knows the instrument.
  InstrumentUsageCluster ClusterByMethod(const std::string& instrument_id) const;
  LintReport ConsistencyLint() const;

  // Canonical text of every stored file, keyed by relative path.
  std::map<std::string, std::string> Files() const;
  // FNV-1a over Files().
  std::string StateHash() const;

  const std::vector<std::string>& command_log() const { return log_; }

 private:
  void Log(Json entry);

  std::map<std::string, ArticleStore> articles_;
  KnowledgeBase shared_kb_;
  AnchorIndex anchors_;
  std::vector<std::string> log_;
};

Json ToJson(const InstrumentUsageCluster& cluster);
Json ToJson(const LintReport& report);

}  // namespace scibrowse

#endif  // SCIBROWSE_LIBRARY_H_
