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

// A small mixed-content DOM built on expat. Namespace prefixes are kept as
// part of element names ("mml:math"); comments and processing instructions
// are dropped; CDATA is merged into text.

#ifndef SCIBROWSE_XML_TREE_H_
#define SCIBROWSE_XML_TREE_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scibrowse/error.h"

namespace scibrowse {

struct XmlNode {
  enum class Kind { kElement, kText };

  Kind kind = Kind::kElement;
  std::string name;  // element name; empty for text
  std::string text;  // text content; empty for elements
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  long line = 0;
  long column = 0;

  bool is_element() const { return kind == Kind::kElement; }
  bool is_text() const { return kind == Kind::kText; }

  std::optional<std::string_view> Attr(std::string_view key) const;

  // First child element with the given name, or nullptr.
  const XmlNode* Child(std::string_view element_name) const;
  std::vector<const XmlNode*> Children(std::string_view element_name) const;

  // Depth-first search below this node (excluding itself).
  const XmlNode* Find(std::string_view element_name) const;

  // Concatenated descendant text, unnormalized.
  std::string InnerText() const;
};

struct XmlDocument {
  XmlNode root;
  std::vector<Warning> warnings;
};

// Throws Error(kMalformedXml) with the expat line/column on failure.
XmlDocument ParseXml(std::string_view bytes);

}  // namespace scibrowse

#endif  // SCIBROWSE_XML_TREE_H_
