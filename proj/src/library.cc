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

#include "scibrowse/library.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "scibrowse/article_json.h"

namespace scibrowse {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFormat = "scibrowse-library";
constexpr int kVersion = 1;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace " + path.string());
}

// Parses a stored file and decodes it, prefixing any schema error with the
// file name.
template <typename Fn>
auto DecodeFile(const fs::path& path, Fn decode) {
  const std::string text = ReadFile(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kCorruptStore, path.string() + ": invalid JSON");
  }
  try {
    return decode(j);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCorruptStore) throw;
    throw Error(ErrorCode::kCorruptStore, path.string() + ": " + e.what());
  }
}

Json SharedToJson(const KnowledgeBase& kb, const AnchorIndex& anchors) {
  Json j = Json::object();
  j["kb"] = kb.ToJson();
  j["anchors"] = anchors.ToJson();
  return j;
}

Json StoreKbToJson(const ArticleStore& store) {
  Json j = Json::object();
  j["kb"] = store.kb.ToJson();
  j["blocks"] = store.blocks.ToJson();
  return j;
}

Json AsCommandArray(const Json& commands) {
  if (commands.is_array()) return commands;
  if (commands.is_object()) return Json::array({commands});
  throw Error(ErrorCode::kInvalidArgument,
              "expected a command object or an array of commands");
}

// Registers instruments used by a store's datasets in the shared store.
void ShareInstruments(const KnowledgeBase& from, KnowledgeBase& shared) {
  for (const auto& [id, ins] : from.instruments()) shared.AddInstrument(ins);
}

}  // namespace

std::string EncodePathSegment(std::string_view id) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (size_t i = 0; i < id.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(id[i]);
    const bool plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                       (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                       (c == '.' && i > 0);
    if (plain) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string MethodSignature(const KnowledgeBase& kb, const Flow& flow) {
  std::string sig = flow.name + "(";
  for (size_t i = 0; i < flow.participants.size(); ++i) {
    const auto& p = flow.participants[i];
    if (i > 0) sig += ",";
    sig += std::string(Name(p.role)) + ":" + kb.ClassOf(p.entity).value_or(p.entity);
  }
  return sig + ")";
}

// ---- reads

std::vector<std::string> Library::ArticleIds() const {
  std::vector<std::string> ids;
  for (const auto& [id, store] : articles_) ids.push_back(id);
  return ids;
}

const ArticleStore* Library::FindArticle(const std::string& id) const {
  auto it = articles_.find(id);
  return it == articles_.end() ? nullptr : &it->second;
}

const ArticleStore& Library::GetArticle(const std::string& id) const {
  const ArticleStore* store = FindArticle(id);
  if (store == nullptr) {
    throw Error(ErrorCode::kUnknownArticle, "unknown article '" + id + "'");
  }
  return *store;
}

StoreLookup Library::Lookup() const {
  return [this](const std::string& id) { return FindArticle(id); };
}

ContextSummary Library::Summarize(const std::string& anchor_id) const {
  return anchors_.Summarize(Lookup(), anchor_id);
}

std::vector<CitationLink> Library::Backlinks(const std::string& article_id) const {
  GetArticle(article_id);
  return anchors_.Backlinks(Lookup(), article_id);
}

InstrumentUsageCluster Library::ClusterByMethod(
    const std::string& instrument_id) const {
  if (!shared_kb_.instruments().contains(instrument_id)) {
    throw Error(ErrorCode::kUnknownInstrument,
                "unknown instrument '" + instrument_id + "'");
  }
  InstrumentUsageCluster cluster;
  cluster.instrument_id = instrument_id;
  for (const auto& [article_id, store] : articles_) {
    for (const auto& [ds_id, ds] : store.kb.datasets()) {
      const auto& ids = ds.instrument_ids;
      if (std::find(ids.begin(), ids.end(), instrument_id) == ids.end()) continue;
      const Flow* flow = store.kb.FindFlow(ds.source_flow_id);
      if (flow == nullptr) continue;
      cluster.groups[MethodSignature(store.kb, *flow)].push_back(
          {article_id, flow->id});
    }
  }
  for (auto& [sig, members] : cluster.groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  return cluster;
}

LintReport Library::ConsistencyLint() const {
  LintReport report;

  // (a) Same-named classes whose dimension declarations differ across
  // stores.
  std::vector<std::pair<std::string, const KnowledgeBase*>> stores;
  stores.emplace_back(std::string(kSharedStoreId), &shared_kb_);
  for (const auto& [id, store] : articles_) stores.emplace_back(id, &store.kb);
  std::map<std::pair<std::string, std::string>,
           std::vector<StateConflict::Declaration>>
      by_dimension;
  for (const auto& [store_id, kb] : stores) {
    for (const auto& [class_id, cls] : kb->classes()) {
      for (const auto& dim : kb->EffectiveDimensions(class_id)) {
        by_dimension[{cls.name, dim.name}].push_back(
            {store_id, class_id, dim.states});
      }
    }
  }
  for (auto& [key, decls] : by_dimension) {
    std::set<std::string> store_ids;
    std::set<std::set<std::string>> state_sets;
    for (const auto& d : decls) {
      store_ids.insert(d.store);
      state_sets.insert(std::set<std::string>(d.states.begin(), d.states.end()));
    }
    if (store_ids.size() < 2 || state_sets.size() < 2) continue;
    report.conflicts.push_back({key.first, key.second, std::move(decls)});
  }

  // (b) Dangling cross-store references.
  std::set<std::string> dangling_anchors;
  for (const auto& [id, anchor] : anchors_.anchors()) {
    const ArticleStore* store = FindArticle(anchor.article_id);
    if (store == nullptr) {
      report.dangling.push_back(
          {"anchor", id, anchor.article_id, "article is not in the library"});
      dangling_anchors.insert(id);
    } else if (!TargetResolves(*store, anchor.target)) {
      report.dangling.push_back(
          {"anchor", id, anchor.article_id, "target does not resolve"});
      dangling_anchors.insert(id);
    }
  }
  for (const auto& m : anchors_.mentions()) {
    if (dangling_anchors.contains(m.anchor_id)) continue;
    const Anchor* anchor = anchors_.FindAnchor(m.anchor_id);
    if (anchor == nullptr) {
      report.dangling.push_back(
          {"mention", m.anchor_id, std::string(kSharedStoreId), "unknown anchor"});
      continue;
    }
    if (!SpanResolves(GetArticle(anchor->article_id).article, m.span)) {
      report.dangling.push_back({"mention", m.anchor_id, anchor->article_id,
                                 "span in '" + m.span.block_id +
                                     "' does not resolve"});
    }
  }
  for (const auto& [id, link] : anchors_.links()) {
    if (anchors_.FindAnchor(link.anchor_id) == nullptr) {
      report.dangling.push_back({"link", id, link.citing_article_id,
                                 "unknown anchor '" + link.anchor_id + "'"});
    }
    const ArticleStore* citing = FindArticle(link.citing_article_id);
    if (citing == nullptr) {
      report.dangling.push_back(
          {"link", id, link.citing_article_id, "citing article is not in the library"});
    } else if (FindMark(citing->article, link.citing_mark_id) == nullptr) {
      report.dangling.push_back({"link", id, link.citing_article_id,
                                 "unknown mark '" + link.citing_mark_id + "'"});
    }
  }
  for (const auto& [article_id, store] : articles_) {
    for (const auto& [ds_id, ds] : store.kb.datasets()) {
      for (const auto& ins : ds.instrument_ids) {
        if (!shared_kb_.instruments().contains(ins)) {
          report.dangling.push_back({"dataset_instrument", ds_id, article_id,
                                     "instrument '" + ins +
                                         "' is not in the shared store"});
        }
      }
    }
  }
  return report;
}

std::map<std::string, std::string> Library::Files() const {
  std::map<std::string, std::string> files;
  Json lib = Json::object();
  lib["format"] = std::string(kFormat);
  lib["version"] = kVersion;
  Json ids = Json::array();
  for (const auto& [id, store] : articles_) ids.push_back(id);
  lib["articles"] = std::move(ids);
  files["library.json"] = CanonicalDump(lib);
  files["shared.json"] = CanonicalDump(SharedToJson(shared_kb_, anchors_));
  for (const auto& [id, store] : articles_) {
    const std::string dir = "articles/" + EncodePathSegment(id) + "/";
    files[dir + "article.json"] = CanonicalDump(ArticleToJson(store.article));
    files[dir + "kb.json"] = CanonicalDump(StoreKbToJson(store));
  }
  std::string log;
  for (const auto& line : log_) log += line + "\n";
  files["commands.log"] = std::move(log);
  return files;
}

std::string Library::StateHash() const {
  std::string all;
  for (const auto& [path, text] : Files()) {
    all += path;
    all += '\0';
    all += text;
    all += '\0';
  }
  return Hex64(Fnv1a64(all));
}

// ---- persistence

void Library::Save(const fs::path& root) const {
  const auto files = Files();
  for (const auto& [rel, text] : files) WriteFile(root / rel, text);
  // Drop directories of removed articles.
  std::error_code ec;
  const fs::path articles = root / "articles";
  if (fs::is_directory(articles, ec)) {
    std::set<std::string> keep;
    for (const auto& [id, store] : articles_) keep.insert(EncodePathSegment(id));
    for (const auto& entry : fs::directory_iterator(articles, ec)) {
      if (!keep.contains(entry.path().filename().string())) {
        fs::remove_all(entry.path(), ec);
      }
    }
  }
}

Library Library::Load(const fs::path& root) {
  Library lib;
  const fs::path index = root / "library.json";
  std::error_code ec;
  if (!fs::exists(index, ec)) return lib;

  const std::vector<std::string> ids = DecodeFile(index, [](const Json& j) {
    if (RequireString(j, "format", "library") != kFormat) {
      throw Error(ErrorCode::kCorruptStore, "library/format: unexpected value");
    }
    if (RequireInt(j, "version", "library") != kVersion) {
      throw Error(ErrorCode::kCorruptStore, "library/version: unsupported");
    }
    std::vector<std::string> out;
    for (const auto& v : RequireArray(j, "articles", "library")) {
      if (!v.is_string()) {
        throw Error(ErrorCode::kCorruptStore, "library/articles: expected string");
      }
      out.push_back(v.get<std::string>());
    }
    return out;
  });

  const fs::path shared = root / "shared.json";
  if (fs::exists(shared, ec)) {
    DecodeFile(shared, [&](const Json& j) {
      lib.shared_kb_ = KnowledgeBase::FromJson(RequireField(j, "kb", "shared"));
      lib.anchors_ = AnchorIndex::FromJson(RequireField(j, "anchors", "shared"));
      return 0;
    });
  }
  for (const auto& id : ids) {
    const fs::path dir = root / "articles" / EncodePathSegment(id);
    ArticleStore store;
    store.article = DecodeFile(dir / "article.json",
                               [](const Json& j) { return ArticleFromJson(j); });
    if (store.article.id != id) {
      throw Error(ErrorCode::kCorruptStore,
                  (dir / "article.json").string() + ": id does not match index");
    }
    DecodeFile(dir / "kb.json", [&](const Json& j) {
      store.kb = KnowledgeBase::FromJson(RequireField(j, "kb", "store"));
      store.blocks = BlockSet::FromJson(RequireField(j, "blocks", "store"));
      return 0;
    });
    lib.articles_.emplace(id, std::move(store));
  }

  const fs::path log = root / "commands.log";
  if (fs::exists(log, ec)) {
    std::istringstream in(ReadFile(log));
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      Json j = Json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::kCorruptStore,
                    log.string() + ":" + std::to_string(n) + ": invalid entry");
      }
      lib.log_.push_back(line);
    }
  }
  return lib;
}

Library Library::Replay(std::string_view command_log) {
  Library lib;
  std::istringstream in{std::string(command_log)};
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const std::string where = "commands.log:" + std::to_string(n);
    Json e = Json::parse(line, nullptr, false);
    if (e.is_discarded()) {
      throw Error(ErrorCode::kCorruptStore, where + ": invalid JSON");
    }
    const std::string op = RequireString(e, "op", where);
    if (op == "ingest") {
      lib.IngestXml(RequireString(e, "xml", where), RequireString(e, "name", where));
    } else if (op == "kb") {
      lib.ApplyCommands(RequireString(e, "store", where),
                        RequireArray(e, "commands", where));
    } else if (op == "anchor") {
      AnchorTarget target;
      auto span = e.find("target_span");
      if (span != e.end() && !span->is_null()) {
        target = SpanFromJson(*span, where + "/target_span");
      } else {
        target = RequireString(e, "target_element", where);
      }
      lib.RegisterAnchor(RequireString(e, "article_id", where), target,
                         RequireString(e, "topic_label", where),
                         OptionalString(e, "id", where));
    } else if (op == "mention") {
      lib.AddMention(RequireString(e, "anchor_id", where),
                     SpanFromJson(RequireField(e, "span", where), where + "/span"));
    } else if (op == "link") {
      lib.LinkCitation(RequireString(e, "citing_article_id", where),
                       RequireString(e, "citing_mark_id", where),
                       RequireString(e, "anchor_id", where),
                       RequireString(e, "role", where));
    } else if (op == "import_links") {
      lib.ImportLinks(RequireString(e, "jsonl", where));
    } else if (op == "add_role") {
      lib.AddRole(RequireString(e, "role", where));
    } else if (op == "remove_article") {
      lib.RemoveArticle(RequireString(e, "article_id", where));
    } else {
      throw Error(ErrorCode::kCorruptStore, where + ": unknown op '" + op + "'");
    }
  }
  return lib;
}

// ---- mutations

void Library::Log(Json entry) { log_.push_back(CompactDump(entry)); }

IngestReport Library::IngestXml(const std::string& bytes,
                                const std::string& name_hint) {
  IngestResult result = Ingest({name_hint, bytes, "jats_xml"});
  const std::string id = result.article.id;
  if (const ArticleStore* existing = FindArticle(id)) {
    if (existing->article == result.article) return result.report;
    throw Error(ErrorCode::kDuplicateId,
                "a different article '" + id + "' is already stored");
  }
  ArticleStore store;
  store.article = std::move(result.article);
  articles_.emplace(id, std::move(store));
  Json e = Json::object();
  e["op"] = "ingest";
  e["name"] = name_hint;
  e["xml"] = bytes;
  Log(std::move(e));
  return result.report;
}

Json Library::ApplyCommands(const std::string& store_id, const Json& commands) {
  const Json batch = AsCommandArray(commands);
  KnowledgeBase shared = shared_kb_;
  InstrumentLookup lookup = [&shared](const std::string& id)
      -> std::optional<Instrument> {
    auto it = shared.instruments().find(id);
    if (it == shared.instruments().end()) return std::nullopt;
    return it->second;
  };
  Json results = Json::array();
  if (store_id == kSharedStoreId) {
    for (const auto& cmd : batch) {
      results.push_back(ApplyKbCommand(nullptr, shared, nullptr, cmd, nullptr));
    }
    shared_kb_ = std::move(shared);
  } else {
    ArticleStore staged = GetArticle(store_id);
    for (const auto& cmd : batch) {
      results.push_back(ApplyKbCommand(staged, cmd, lookup));
    }
    ShareInstruments(staged.kb, shared);
    articles_[store_id] = std::move(staged);
    shared_kb_ = std::move(shared);
  }
  Json e = Json::object();
  e["op"] = "kb";
  e["store"] = store_id;
  e["commands"] = batch;
  Log(std::move(e));
  return results;
}

const Anchor& Library::RegisterAnchor(const std::string& article_id,
                                      const AnchorTarget& target,
                                      const std::string& topic_label,
                                      const std::string& id) {
  const Anchor& a =
      anchors_.RegisterAnchor(Lookup(), article_id, target, topic_label, id);
  Json e = Json::object();
  e["op"] = "anchor";
  e["article_id"] = article_id;
  if (const auto* span = std::get_if<Span>(&target)) {
    e["target_span"] = SpanToJson(*span);
  } else {
    e["target_element"] = std::get<std::string>(target);
  }
  e["topic_label"] = topic_label;
  e["id"] = id;
  Log(std::move(e));
  return a;
}

void Library::AddMention(const std::string& anchor_id, const Span& span) {
  anchors_.AddMention(Lookup(), anchor_id, span);
  Json e = Json::object();
  e["op"] = "mention";
  e["anchor_id"] = anchor_id;
  e["span"] = SpanToJson(span);
  Log(std::move(e));
}

const CitationLink& Library::LinkCitation(const std::string& citing_article_id,
                                          const std::string& mark_id,
                                          const std::string& anchor_id,
                                          const std::string& role) {
  const CitationLink& link =
      anchors_.LinkCitation(Lookup(), citing_article_id, mark_id, anchor_id, role);
  Json e = Json::object();
  e["op"] = "link";
  e["citing_article_id"] = citing_article_id;
  e["citing_mark_id"] = mark_id;
  e["anchor_id"] = anchor_id;
  e["role"] = role;
  Log(std::move(e));
  return link;
}

size_t Library::ImportLinks(std::string_view jsonl) {
  const size_t n = anchors_.ImportLinks(Lookup(), jsonl);
  Json e = Json::object();
  e["op"] = "import_links";
  e["jsonl"] = std::string(jsonl);
  Log(std::move(e));
  return n;
}

void Library::AddRole(const std::string& role) {
  anchors_.AddRole(role);
  Json e = Json::object();
  e["op"] = "add_role";
  e["role"] = role;
  Log(std::move(e));
}

void Library::RemoveArticle(const std::string& article_id) {
  if (articles_.erase(article_id) == 0) {
    throw Error(ErrorCode::kUnknownArticle, "unknown article '" + article_id + "'");
  }
  Json e = Json::object();
  e["op"] = "remove_article";
  e["article_id"] = article_id;
  Log(std::move(e));
}

// ---- JSON views

Json ToJson(const InstrumentUsageCluster& c) {
  Json j = Json::object();
  j["instrument_id"] = c.instrument_id;
  Json groups = Json::array();
  for (const auto& [sig, members] : c.groups) {
    Json g = Json::object();
    g["signature"] = sig;
    Json ms = Json::array();
    for (const auto& m : members) {
      Json mj = Json::object();
      mj["article_id"] = m.article_id;
      mj["flow_id"] = m.flow_id;
      ms.push_back(std::move(mj));
    }
    g["members"] = std::move(ms);
    groups.push_back(std::move(g));
  }
  j["groups"] = std::move(groups);
  return j;
}

Json ToJson(const LintReport& r) {
  Json j = Json::object();
  Json conflicts = Json::array();
  for (const auto& c : r.conflicts) {
    Json cj = Json::object();
    cj["class_name"] = c.class_name;
    cj["dimension"] = c.dimension;
    Json decls = Json::array();
    for (const auto& d : c.declarations) {
      Json dj = Json::object();
      dj["store"] = d.store;
      dj["class_id"] = d.class_id;
      Json states = Json::array();
      for (const auto& s : d.states) states.push_back(s);
      dj["states"] = std::move(states);
      decls.push_back(std::move(dj));
    }
    cj["declarations"] = std::move(decls);
    conflicts.push_back(std::move(cj));
  }
  j["conflicts"] = std::move(conflicts);
  Json dangling = Json::array();
  for (const auto& d : r.dangling) {
    Json dj = Json::object();
    dj["kind"] = d.kind;
    dj["id"] = d.id;
    dj["store"] = d.store;
    dj["detail"] = d.detail;
    dangling.push_back(std::move(dj));
  }
  j["dangling"] = std::move(dangling);
  return j;
}

}  // namespace scibrowse
