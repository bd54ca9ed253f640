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

#include "scibrowse/article_json.h"

#include <cstdio>

namespace scibrowse {

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

namespace {

[[noreturn]] void Corrupt(std::string_view where, std::string_view what) {
  throw Error(ErrorCode::kCorruptStore,
              std::string(where) + ": " + std::string(what));
}

std::string Path(std::string_view where, std::string_view key) {
  return std::string(where) + "/" + std::string(key);
}

}  // namespace

const Json& RequireField(const Json& obj, std::string_view key,
                         std::string_view where) {
  if (!obj.is_object()) Corrupt(where, "expected object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) Corrupt(Path(where, key), "missing field");
  return *it;
}

std::string RequireString(const Json& obj, std::string_view key,
                          std::string_view where) {
  const Json& v = RequireField(obj, key, where);
  if (!v.is_string()) Corrupt(Path(where, key), "expected string");
  return v.get<std::string>();
}

int64_t RequireInt(const Json& obj, std::string_view key,
                   std::string_view where) {
  const Json& v = RequireField(obj, key, where);
  if (!v.is_number_integer()) Corrupt(Path(where, key), "expected integer");
  return v.get<int64_t>();
}

bool RequireBool(const Json& obj, std::string_view key,
                 std::string_view where) {
  const Json& v = RequireField(obj, key, where);
  if (!v.is_boolean()) Corrupt(Path(where, key), "expected boolean");
  return v.get<bool>();
}

const Json& RequireArray(const Json& obj, std::string_view key,
                         std::string_view where) {
  const Json& v = RequireField(obj, key, where);
  if (!v.is_array()) Corrupt(Path(where, key), "expected array");
  return v;
}

std::string OptionalString(const Json& obj, std::string_view key,
                           std::string_view where) {
  if (!obj.is_object()) Corrupt(where, "expected object");
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return "";
  if (!it->is_string()) Corrupt(Path(where, key), "expected string");
  return it->get<std::string>();
}

Json SpanToJson(const Span& span) {
  Json j = Json::object();
  j["block_id"] = span.block_id;
  j["start"] = span.start;
  j["end"] = span.end;
  return j;
}

Span SpanFromJson(const Json& j, std::string_view where) {
  Span s;
  s.block_id = RequireString(j, "block_id", where);
  const int64_t start = RequireInt(j, "start", where);
  const int64_t end = RequireInt(j, "end", where);
  if (start < 0 || end < 0) Corrupt(where, "negative offset");
  s.start = static_cast<size_t>(start);
  s.end = static_cast<size_t>(end);
  return s;
}

Json PersonNameToJson(const PersonName& name) {
  Json j = Json::object();
  j["surname"] = name.surname;
  j["given"] = name.given;
  j["structured"] = name.structured;
  return j;
}

namespace {

PersonName PersonNameFromJson(const Json& j, std::string_view where) {
  PersonName p;
  p.surname = RequireString(j, "surname", where);
  p.given = RequireString(j, "given", where);
  p.structured = RequireBool(j, "structured", where);
  return p;
}

Json StringList(const std::vector<std::string>& v) {
  Json j = Json::array();
  for (const auto& s : v) j.push_back(s);
  return j;
}

std::vector<std::string> StringListFromJson(const Json& arr,
                                            std::string_view where) {
  std::vector<std::string> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      Corrupt(Path(where, std::to_string(i)), "expected string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

Json MarkToJson(const InlineCitationMark& m) {
  Json j = Json::object();
  j["id"] = m.id;
  j["span"] = SpanToJson(m.span);
  j["target_ref_ids"] = StringList(m.target_ref_ids);
  j["display_number"] = m.display_number;
  j["resolved"] = m.resolved;
  return j;
}

InlineCitationMark MarkFromJson(const Json& j, std::string_view where) {
  InlineCitationMark m;
  m.id = RequireString(j, "id", where);
  m.span = SpanFromJson(RequireField(j, "span", where), Path(where, "span"));
  m.target_ref_ids = StringListFromJson(
      RequireArray(j, "target_ref_ids", where), Path(where, "target_ref_ids"));
  m.display_number = static_cast<int>(RequireInt(j, "display_number", where));
  m.resolved = RequireBool(j, "resolved", where);
  return m;
}

ContentBlock BlockFromJson(const Json& j, std::string_view where) {
  ContentBlock b;
  b.id = RequireString(j, "id", where);
  auto kind = ParseBlockKind(RequireString(j, "kind", where));
  if (!kind) Corrupt(Path(where, "kind"), "unknown block kind");
  b.kind = *kind;
  b.text = RequireString(j, "text", where);
  const Json& marks = RequireArray(j, "marks", where);
  for (size_t i = 0; i < marks.size(); ++i) {
    b.marks.push_back(
        MarkFromJson(marks[i], Path(where, "marks/" + std::to_string(i))));
  }
  if (j.contains("cells")) {
    const Json& rows = RequireArray(j, "cells", where);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array()) {
        Corrupt(Path(where, "cells/" + std::to_string(r)), "expected array");
      }
      b.cells.push_back(StringListFromJson(
          rows[r], Path(where, "cells/" + std::to_string(r))));
    }
  }
  return b;
}

Json SectionToJson(const Section& s) {
  Json j = Json::object();
  j["id"] = s.id;
  j["level"] = s.level;
  j["heading"] = s.heading;
  j["deep"] = s.deep;
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back(BlockToJson(b));
  j["blocks"] = std::move(blocks);
  Json children = Json::array();
  for (const auto& c : s.children) children.push_back(SectionToJson(c));
  j["children"] = std::move(children);
  return j;
}

Section SectionFromJson(const Json& j, std::string_view where) {
  Section s;
  s.id = RequireString(j, "id", where);
  s.level = static_cast<int>(RequireInt(j, "level", where));
  s.heading = RequireString(j, "heading", where);
  s.deep = RequireBool(j, "deep", where);
  const Json& blocks = RequireArray(j, "blocks", where);
  for (size_t i = 0; i < blocks.size(); ++i) {
    s.blocks.push_back(
        BlockFromJson(blocks[i], Path(where, "blocks/" + std::to_string(i))));
  }
  const Json& children = RequireArray(j, "children", where);
  for (size_t i = 0; i < children.size(); ++i) {
    s.children.push_back(SectionFromJson(
        children[i], Path(where, "children/" + std::to_string(i))));
  }
  return s;
}

Reference ReferenceFromJson(const Json& j, std::string_view where) {
  Reference r;
  r.id = RequireString(j, "id", where);
  r.original_number = static_cast<int>(RequireInt(j, "original_number", where));
  r.label = RequireString(j, "label", where);
  const Json& authors = RequireArray(j, "authors", where);
  for (size_t i = 0; i < authors.size(); ++i) {
    r.authors.push_back(PersonNameFromJson(
        authors[i], Path(where, "authors/" + std::to_string(i))));
  }
  r.year = RequireString(j, "year", where);
  r.title = RequireString(j, "title", where);
  r.source_venue = RequireString(j, "source_venue", where);
  const Json& doi = RequireField(j, "doi", where);
  if (doi.is_string()) {
    r.doi = doi.get<std::string>();
  } else if (!doi.is_null()) {
    Corrupt(Path(where, "doi"), "expected string or null");
  }
  return r;
}

}  // namespace

Json BlockToJson(const ContentBlock& b) {
  Json j = Json::object();
  j["id"] = b.id;
  j["kind"] = std::string(BlockKindName(b.kind));
  j["text"] = b.text;
  Json marks = Json::array();
  for (const auto& m : b.marks) marks.push_back(MarkToJson(m));
  j["marks"] = std::move(marks);
  if (b.kind == BlockKind::kTable) {
    Json rows = Json::array();
    for (const auto& row : b.cells) rows.push_back(StringList(row));
    j["cells"] = std::move(rows);
  }
  return j;
}

Json ReferenceToJson(const Reference& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["original_number"] = r.original_number;
  j["label"] = r.label;
  Json authors = Json::array();
  for (const auto& a : r.authors) authors.push_back(PersonNameToJson(a));
  j["authors"] = std::move(authors);
  j["year"] = r.year;
  j["title"] = r.title;
  j["source_venue"] = r.source_venue;
  j["doi"] = r.doi ? Json(*r.doi) : Json(nullptr);
  return j;
}

Json ArticleToJson(const Article& a) {
  Json j = Json::object();
  j["id"] = a.id;
  j["title"] = a.title;
  Json authors = Json::array();
  for (const auto& p : a.authors) authors.push_back(PersonNameToJson(p));
  j["authors"] = std::move(authors);
  Json abstract = Json::array();
  for (const auto& b : a.abstract) abstract.push_back(BlockToJson(b));
  j["abstract"] = std::move(abstract);
  Json sections = Json::array();
  for (const auto& s : a.sections) sections.push_back(SectionToJson(s));
  j["sections"] = std::move(sections);
  Json refs = Json::array();
  for (const auto& r : a.references) refs.push_back(ReferenceToJson(r));
  j["references"] = std::move(refs);
  j["figures"] = StringList(a.figures);
  Json prov = Json::object();
  prov["article_id"] = a.provenance.article_id;
  prov["format_tag"] = a.provenance.format_tag;
  prov["byte_length"] = a.provenance.byte_length;
  prov["checksum"] = a.provenance.checksum;
  j["provenance"] = std::move(prov);
  return j;
}

Article ArticleFromJson(const Json& j) {
  const std::string where = "article";
  Article a;
  a.id = RequireString(j, "id", where);
  a.title = RequireString(j, "title", where);
  const Json& authors = RequireArray(j, "authors", where);
  for (size_t i = 0; i < authors.size(); ++i) {
    a.authors.push_back(PersonNameFromJson(
        authors[i], Path(where, "authors/" + std::to_string(i))));
  }
  const Json& abstract = RequireArray(j, "abstract", where);
  for (size_t i = 0; i < abstract.size(); ++i) {
    a.abstract.push_back(BlockFromJson(
        abstract[i], Path(where, "abstract/" + std::to_string(i))));
  }
  const Json& sections = RequireArray(j, "sections", where);
  for (size_t i = 0; i < sections.size(); ++i) {
    a.sections.push_back(SectionFromJson(
        sections[i], Path(where, "sections/" + std::to_string(i))));
  }
  const Json& refs = RequireArray(j, "references", where);
  for (size_t i = 0; i < refs.size(); ++i) {
    a.references.push_back(ReferenceFromJson(
        refs[i], Path(where, "references/" + std::to_string(i))));
  }
  a.figures = StringListFromJson(RequireArray(j, "figures", where),
                                 Path(where, "figures"));
  const Json& prov = RequireField(j, "provenance", where);
  const std::string pw = Path(where, "provenance");
  a.provenance.article_id = RequireString(prov, "article_id", pw);
  a.provenance.format_tag = RequireString(prov, "format_tag", pw);
  a.provenance.byte_length =
      static_cast<uint64_t>(RequireInt(prov, "byte_length", pw));
  a.provenance.checksum = RequireString(prov, "checksum", pw);
  return a;
}

}  // namespace scibrowse
