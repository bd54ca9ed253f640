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

#include "scibrowse/xml_tree.h"

#include <expat.h>

#include <climits>
#include <map>
#include <memory>

#include "scibrowse/utf8.h"

namespace scibrowse {

std::optional<std::string_view> XmlNode::Attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

const XmlNode* XmlNode::Child(std::string_view element_name) const {
  for (const auto& c : children) {
    if (c.is_element() && c.name == element_name) return &c;
  }
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::Children(
    std::string_view element_name) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children) {
    if (c.is_element() && c.name == element_name) out.push_back(&c);
  }
  return out;
}

const XmlNode* XmlNode::Find(std::string_view element_name) const {
  for (const auto& c : children) {
    if (!c.is_element()) continue;
    if (c.name == element_name) return &c;
    if (const XmlNode* hit = c.Find(element_name)) return hit;
  }
  return nullptr;
}

std::string XmlNode::InnerText() const {
  if (is_text()) return text;
  std::string out;
  for (const auto& c : children) out += c.InnerText();
  return out;
}

namespace {

// Entities commonly used by publishers that expect the JATS DTD to define
// them. Expat reports them as skipped because the external subset is never
// loaded.
const std::map<std::string, char32_t, std::less<>>& KnownEntities() {
  static const std::map<std::string, char32_t, std::less<>> kTable = {
      {"nbsp", 0xA0},   {"ndash", 0x2013}, {"mdash", 0x2014},
      {"thinsp", 0x2009}, {"hellip", 0x2026}, {"lsquo", 0x2018},
      {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
      {"deg", 0xB0},    {"plusmn", 0xB1},  {"times", 0xD7},
      {"micro", 0xB5},  {"alpha", 0x3B1},  {"beta", 0x3B2},
      {"gamma", 0x3B3}, {"delta", 0x3B4},  {"mu", 0x3BC},
      {"copy", 0xA9},   {"reg", 0xAE},     {"le", 0x2264},
      {"ge", 0x2265},   {"minus", 0x2212}, {"middot", 0xB7},
  };
  return kTable;
}

struct BuildState {
  XML_Parser parser = nullptr;
  XmlNode document;  // synthetic holder for the root element
  std::vector<XmlNode*> stack;
  std::vector<Warning> warnings;

  void AppendText(std::string_view s) {
    XmlNode* top = stack.back();
    if (!top->children.empty() && top->children.back().is_text()) {
      top->children.back().text.append(s);
      return;
    }
    XmlNode t;
    t.kind = XmlNode::Kind::kText;
    t.text = std::string(s);
    t.line = XML_GetCurrentLineNumber(parser);
    t.column = XML_GetCurrentColumnNumber(parser) + 1;
    top->children.push_back(std::move(t));
  }
};

void XMLCALL OnStart(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<BuildState*>(data);
  XmlNode node;
  node.name = name;
  node.line = XML_GetCurrentLineNumber(st->parser);
  node.column = XML_GetCurrentColumnNumber(st->parser) + 1;
  for (int i = 0; atts[i] != nullptr; i += 2) {
    node.attributes.emplace_back(atts[i], atts[i + 1]);
  }
  XmlNode* parent = st->stack.back();
  parent->children.push_back(std::move(node));
  st->stack.push_back(&parent->children.back());
}

void XMLCALL OnEnd(void* data, const XML_Char*) {
  static_cast<BuildState*>(data)->stack.pop_back();
}

void XMLCALL OnText(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(data);
  if (st->stack.size() <= 1) return;  // whitespace outside the root
  st->AppendText(std::string_view(s, static_cast<size_t>(len)));
}

void XMLCALL OnSkippedEntity(void* data, const XML_Char* name,
                             int is_parameter_entity) {
  if (is_parameter_entity) return;
  auto* st = static_cast<BuildState*>(data);
  if (st->stack.size() <= 1) return;
  const auto& table = KnownEntities();
  auto it = table.find(std::string_view(name));
  if (it != table.end()) {
    std::string s;
    utf8::Append(s, it->second);
    st->AppendText(s);
    return;
  }
  st->AppendText(std::string("&") + name + ";");
  st->warnings.push_back(
      {"UnknownEntity", std::string("undeclared entity &") + name + "; kept verbatim",
       static_cast<long>(XML_GetCurrentLineNumber(st->parser)),
       static_cast<long>(XML_GetCurrentColumnNumber(st->parser)) + 1});
}

}  // namespace

XmlDocument ParseXml(std::string_view bytes) {
  if (bytes.size() > static_cast<size_t>(INT_MAX)) {
    throw Error(ErrorCode::kMalformedXml, "document too large");
  }
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)>
      parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw Error(ErrorCode::kIo, "cannot allocate XML parser");

  BuildState st;
  st.parser = parser.get();
  st.stack.push_back(&st.document);
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), OnStart, OnEnd);
  XML_SetCharacterDataHandler(parser.get(), OnText);
  XML_SetSkippedEntityHandler(parser.get(), OnSkippedEntity);
  XML_SetParamEntityParsing(parser.get(), XML_PARAM_ENTITY_PARSING_NEVER);

  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()),
                XML_TRUE) == XML_STATUS_ERROR) {
    const long line = XML_GetCurrentLineNumber(parser.get());
    const long column = XML_GetCurrentColumnNumber(parser.get()) + 1;
    throw Error(ErrorCode::kMalformedXml,
                std::to_string(line) + ":" + std::to_string(column) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())),
                line, column);
  }

  XmlDocument doc;
  for (auto& c : st.document.children) {
    if (c.is_element()) {
      doc.root = std::move(c);
      break;
    }
  }
  doc.warnings = std::move(st.warnings);
  return doc;
}

}  // namespace scibrowse
