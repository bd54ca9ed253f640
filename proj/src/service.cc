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

#include "scibrowse/service.h"

#include <array>
#include <mutex>

#include "httplib.h"
#include "scibrowse/article_json.h"
#include "scibrowse/navigation.h"
#include "scibrowse/references.h"

namespace scibrowse {

namespace {

HttpResponse JsonResponse(const Json& j, int status = 200) {
  return {status, CanonicalDump(j), "application/json"};
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownArticle:
    case ErrorCode::kUnknownAnchor:
    case ErrorCode::kUnknownInstrument:
      return 404;
    case ErrorCode::kIo:
      return 500;
    default:
      return 400;
  }
}

HttpResponse ErrorResponse(int status, std::string_view code,
                           std::string_view message) {
  Json j = Json::object();
  Json e = Json::object();
  e["code"] = std::string(code);
  e["message"] = std::string(message);
  j["error"] = std::move(e);
  return JsonResponse(j, status);
}

bool StripPrefix(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

bool StripSuffix(std::string_view& s, std::string_view suffix) {
  if (!s.ends_with(suffix) || s.size() == suffix.size()) return false;
  s.remove_suffix(suffix.size());
  return true;
}

std::optional<std::string> Param(const HttpRequest& r, const std::string& key) {
  auto it = r.params.find(key);
  if (it == r.params.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

Json ArticleList(const Library& lib) {
  Json arr = Json::array();
  for (const auto& id : lib.ArticleIds()) {
    const Article& a = lib.GetArticle(id).article;
    Json j = Json::object();
    j["id"] = a.id;
    j["title"] = a.title;
    j["sections"] = CountSections(a);
    j["references"] = a.references.size();
    j["citation_marks"] = CountMarks(a);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json TocResponse(const ArticleStore& store,
                 const std::optional<std::string>& selected) {
  std::vector<Warning> warnings;
  const auto toc = ExtendToc(store.article, BuildToc(store.article, &warnings),
                             store.blocks.ListBlocks(store.article));
  Json j = Json::object();
  j["article_id"] = store.article.id;
  j["toc"] = TocToJson(toc);
  j["view"] = TocViewToJson(FisheyeSelect(toc, selected));
  Json ws = Json::array();
  for (const auto& w : warnings) {
    Json wj = Json::object();
    wj["code"] = w.code;
    wj["message"] = w.message;
    ws.push_back(std::move(wj));
  }
  j["warnings"] = std::move(ws);
  return j;
}

Json ReferencesResponse(const ArticleStore& store, const std::string& mode_name) {
  auto mode = ParseOrderMode(mode_name);
  if (!mode) {
    throw Error(ErrorCode::kInvalidArgument, "unknown order '" + mode_name + "'");
  }
  const ReferenceOrder order = OrderBy(store.article, *mode);
  const RenumberResult renumbered = Renumber(store.article, order);
  Json j = ReferenceOrderToJson(store.article, order, renumbered.map);
  Json marks = Json::array();
  ForEachBlock(renumbered.article, [&](const ContentBlock& b) {
    for (const auto& m : b.marks) {
      Json mj = Json::object();
      mj["id"] = m.id;
      mj["span"] = SpanToJson(m.span);
      Json targets = Json::array();
      for (const auto& t : m.target_ref_ids) targets.push_back(t);
      mj["target_ref_ids"] = std::move(targets);
      mj["resolved"] = m.resolved;
      mj["display_number"] = m.display_number;
      marks.push_back(std::move(mj));
    }
  });
  j["marks"] = std::move(marks);
  return j;
}

Json BlocksResponse(const ArticleStore& store) {
  Json j = Json::object();
  j["article_id"] = store.article.id;
  Json arr = Json::array();
  for (const auto& o : store.blocks.ListBlocks(store.article)) {
    Json bj = Json::object();
    bj["id"] = o.id;
    bj["kind"] = std::string(TocEntryKindName(o.kind));
    bj["goal_label"] = o.goal_label;
    Json spans = Json::array();
    for (const auto& s : o.spans) spans.push_back(SpanToJson(s));
    bj["spans"] = std::move(spans);
    if (auto it = store.blocks.rq_blocks().find(o.id);
        it != store.blocks.rq_blocks().end()) {
      bj["block"] = ToJson(it->second);
    } else {
      bj["block"] = ToJson(store.blocks.activity_blocks().at(o.id));
    }
    arr.push_back(std::move(bj));
  }
  j["blocks"] = std::move(arr);
  return j;
}

Json BacklinksResponse(const Library& lib, const std::string& id) {
  Json j = Json::object();
  j["article_id"] = id;
  Json arr = Json::array();
  for (const auto& l : lib.Backlinks(id)) arr.push_back(ToJson(l));
  j["backlinks"] = std::move(arr);
  return j;
}

Json IngestReportToJson(const IngestReport& r) {
  Json j = Json::object();
  j["article_id"] = r.article_id;
  j["sections_found"] = r.sections_found;
  j["references_found"] = r.references_found;
  j["citation_marks_found"] = r.citation_marks_found;
  j["grouped_marks_split"] = r.grouped_marks_split;
  Json ws = Json::array();
  for (const auto& w : r.warnings) {
    Json wj = Json::object();
    wj["code"] = w.code;
    wj["message"] = w.message;
    wj["line"] = w.line;
    wj["column"] = w.column;
    ws.push_back(std::move(wj));
  }
  j["warnings"] = std::move(ws);
  return j;
}

}  // namespace

Service::Service(Library library, std::optional<std::filesystem::path> root)
    : library_(std::move(library)), root_(std::move(root)) {}

std::string Service::StateHash() const {
  std::shared_lock lock(mu_);
  return library_.StateHash();
}

HttpResponse Service::Handle(const HttpRequest& request) {
  try {
    if (request.method == "GET") {
      std::shared_lock lock(mu_);
      return Get(request);
    }
    if (request.method == "POST") {
      std::unique_lock lock(mu_);
      return Post(request);
    }
    return ErrorResponse(405, "MethodNotAllowed", request.method);
  } catch (const Error& e) {
    return ErrorResponse(StatusFor(e.code()), ErrorCodeName(e.code()), e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, "Internal", e.what());
  }
}

HttpResponse Service::Get(const HttpRequest& r) const {
  const Library& lib = library_;
  std::string_view path = r.path;
  if (path == "/articles" || path == "/articles/") {
    return JsonResponse(ArticleList(lib));
  }
  if (StripPrefix(path, "/articles/")) {
    static constexpr std::array<std::string_view, 5> kViews = {
        "/toc", "/references", "/blocks", "/model", "/backlinks"};
    for (std::string_view view : kViews) {
      std::string_view id = path;
      if (!StripSuffix(id, view)) continue;
      const ArticleStore* store = lib.FindArticle(std::string(id));
      if (store == nullptr) continue;
      if (view == "/toc") {
        return JsonResponse(TocResponse(*store, Param(r, "selected")));
      }
      if (view == "/references") {
        return JsonResponse(
            ReferencesResponse(*store, Param(r, "order").value_or("appearance")));
      }
      if (view == "/blocks") return JsonResponse(BlocksResponse(*store));
      if (view == "/model") {
        Json j = Json::object();
        j["article_id"] = store->article.id;
        j["kb"] = store->kb.ToJson();
        return JsonResponse(j);
      }
      return JsonResponse(BacklinksResponse(lib, std::string(id)));
    }
    return JsonResponse(ArticleToJson(lib.GetArticle(std::string(path)).article));
  }
  if (StripPrefix(path, "/anchors/") && StripSuffix(path, "/context")) {
    return JsonResponse(ToJson(lib.Summarize(std::string(path))));
  }
  if (StripPrefix(path, "/instruments/") && StripSuffix(path, "/usages")) {
    return JsonResponse(ToJson(lib.ClusterByMethod(std::string(path))));
  }
  return ErrorResponse(404, "NotFound", r.path);
}

HttpResponse Service::Post(const HttpRequest& r) {
  std::string_view path = r.path;
  Json out;
  if (path == "/ingest") {
    if (r.body.empty()) {
      return ErrorResponse(400, "InvalidArgument", "empty request body");
    }
    out = IngestReportToJson(
        library_.IngestXml(r.body, Param(r, "name").value_or("upload")));
  } else if (StripPrefix(path, "/kb/") && StripSuffix(path, "/commands")) {
    Json commands = Json::parse(r.body, nullptr, false);
    if (commands.is_discarded()) {
      return ErrorResponse(400, "InvalidArgument", "request body is not JSON");
    }
    out = Json::object();
    out["store"] = std::string(path);
    out["results"] = library_.ApplyCommands(std::string(path), commands);
  } else {
    return ErrorResponse(404, "NotFound", r.path);
  }
  if (root_) library_.Save(*root_);
  return JsonResponse(out);
}

void Service::Mount(httplib::Server& server) {
  auto adapter = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.params.emplace(k, v);
    if (req.is_multipart_form_data() && req.has_file("file")) {
      r.body = req.get_file_value("file").content;
    } else {
      r.body = req.body;
    }
    HttpResponse out = Handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(".*", adapter);
  server.Post(".*", adapter);
}

bool Serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.Mount(server);
  return server.listen(host, port);
}

}  // namespace scibrowse
