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

#include "scibrowse/ingest.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "scibrowse/canonical_json.h"
#include "scibrowse/utf8.h"
#include "scibrowse/xml_tree.h"

namespace scibrowse {
namespace {

// Largest range a single display text may expand to ("1–9999" is a typo,
// not a citation of 9999 works).
constexpr int kMaxRangeWidth = 200;

bool IsDash(char32_t cp) {
  return cp == '-' || cp == 0x2010 || cp == 0x2011 || cp == 0x2012 ||
         cp == 0x2013 || cp == 0x2014 || cp == 0x2212;
}

const std::set<std::string, std::less<>>& InlineElements() {
  static const std::set<std::string, std::less<>> kInline = {
      "italic", "bold", "sup", "sub", "sc", "underline", "monospace",
      "roman", "sans-serif", "overline", "strike", "named-content",
      "styled-content", "ext-link", "uri", "email", "inline-formula",
      "inline-graphic", "abbrev", "fn", "label", "tex-math", "xref",
      "chem-struct", "disp-formula", "disp-quote", "list", "list-item",
      "def-list", "def-item", "term", "def", "alternatives", "target", "x",
      "private-char", "glyph-data", "glyph-ref", "inline-supplementary-material",
      "related-article", "related-object", "hr", "break", "p", "title",
      "caption", "graphic", "media", "citation-alternatives", "element-citation",
      "mixed-citation", "funding-source", "award-id", "milestone-start",
      "milestone-end", "preformat", "ruby", "rb", "rt", "underline-start",
      "underline-end", "object-id", "attrib", "string-date", "string-name",
      "person-group", "name", "surname", "given-names", "year", "source",
      "article-title", "volume", "fpage", "lpage", "etal", "pub-id", "collab",
      "comment", "issue", "month", "day", "publisher-name", "publisher-loc",
      "table", "thead", "tbody", "tfoot", "tr", "td", "th", "col", "colgroup",
      "statement", "array", "sig", "sig-block", "verse-group", "verse-line",
      "speech", "speaker", "code", "textual-form", "copyright-statement",
      "license", "license-p", "permissions", "copyright-year",
      "copyright-holder", "attrib", "ack", "sec"};
  return kInline;
}

bool IsKnownInline(std::string_view name) {
  if (name.substr(0, 4) == "mml:") return true;
  return InlineElements().contains(name);
}

// Accumulates whitespace-normalized block text while recording citation
// marks at code-point offsets.
class BlockBuilder {
 public:
  struct PendingMark {
    size_t start = 0;
    size_t end = 0;
    size_t end_byte = 0;
    std::vector<std::string> rids;
    long line = 0;
    long column = 0;
  };

  void AppendText(std::string_view s) {
    for (char c : s) {
      if (utf8::IsXmlSpace(c)) {
        pending_space_ = !text_.empty();
        continue;
      }
      FlushSpace();
      text_.push_back(c);
      if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++length_;
    }
  }

  void BeginMark() {
    FlushSpace();
    mark_start_ = length_;
    mark_start_byte_ = text_.size();
  }

  void EndMark(std::vector<std::string> rids, long line, long column) {
    // Two marks separated only by a dash form a range.
    if (!marks_.empty()) {
      PendingMark& prev = marks_.back();
      std::string_view between(text_.data() + prev.end_byte,
                               mark_start_byte_ - prev.end_byte);
      auto cps = utf8::Decode(between);
      std::vector<char32_t> non_space;
      for (char32_t cp : cps) {
        if (cp != ' ') non_space.push_back(cp);
      }
      if (non_space.size() == 1 && IsDash(non_space[0])) {
        prev.end = length_;
        prev.end_byte = text_.size();
        for (auto& r : rids) prev.rids.push_back(std::move(r));
        return;
      }
    }
    PendingMark m;
    m.start = mark_start_;
    m.end = length_;
    m.end_byte = text_.size();
    m.rids = std::move(rids);
    m.line = line;
    m.column = column;
    marks_.push_back(std::move(m));
  }

  bool empty() const { return text_.empty() && marks_.empty(); }
  const std::string& text() const { return text_; }
  std::vector<PendingMark>& marks() { return marks_; }

  void Reset() {
    text_.clear();
    marks_.clear();
    length_ = 0;
    pending_space_ = false;
  }

 private:
  void FlushSpace() {
    if (pending_space_) {
      text_.push_back(' ');
      ++length_;
      pending_space_ = false;
    }
  }

  std::string text_;
  size_t length_ = 0;
  bool pending_space_ = false;
  size_t mark_start_ = 0;
  size_t mark_start_byte_ = 0;
  std::vector<PendingMark> marks_;
};

std::vector<std::string> SplitIds(std::string_view rid) {
  std::vector<std::string> out;
  std::istringstream in{std::string(rid)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string Collapsed(const XmlNode* node) {
  return node == nullptr ? "" : utf8::CollapseWhitespace(node->InnerText());
}

class JatsSegmenter {
 public:
  explicit JatsSegmenter(const RawSource& source) : source_(source) {}

  ParsedArticle Run() {
    XmlDocument doc = ParseXml(source_.bytes);
    warnings_ = std::move(doc.warnings);
    const XmlNode& root = doc.root;
    if (root.name != "article") {
      throw Error(ErrorCode::kUnrecognizedSchema,
                  "root element <" + root.name + "> is not a JATS <article>",
                  root.line, root.column);
    }

    article_.provenance.format_tag = source_.format_tag;
    article_.provenance.byte_length = source_.bytes.size();
    article_.provenance.checksum = Hex64(Fnv1a64(source_.bytes));
    article_.id = source_.article_id;

    std::vector<const XmlNode*> extra_abstracts;
    if (const XmlNode* front = root.Child("front")) {
      ParseFront(*front, extra_abstracts);
    }
    article_.provenance.article_id = article_.id;
    for (const XmlNode* abs : extra_abstracts) {
      AddTopSection(ParseSectionLike(*abs, NextTopId(), 1,
                                     TitleOr(*abs, "Author Summary")));
    }
    if (const XmlNode* body = root.Child("body")) ParseBody(*body);
    if (const XmlNode* back = root.Child("back")) ParseBack(*back);
    if (const XmlNode* floats = root.Child("floats-group")) {
      AddTopSection(
          ParseSectionLike(*floats, NextTopId(), 1, "Figures and Tables"));
    }
    for (const auto& c : root.children) {
      if (!c.is_element()) continue;
      if (c.name == "front" || c.name == "body" || c.name == "back" ||
          c.name == "floats-group") {
        continue;
      }
      Warn("UnknownElement", "unhandled <" + c.name + "> under <article>", c);
      Section s;
      s.id = NextTopId();
      s.level = 1;
      BlockBuilder b;
      AppendInline(c, b);
      if (!b.empty()) FlushBlock(s, b, BlockKind::kParagraph);
      AddTopSection(std::move(s));
    }

    ResolveMarks();
    return {std::move(article_), std::move(warnings_)};
  }

 private:
  void Warn(std::string code, std::string message, const XmlNode& at) {
    warnings_.push_back(
        {std::move(code), std::move(message), at.line, at.column});
  }

  std::string NextTopId() {
    return "s" + std::to_string(article_.sections.size() + 1);
  }

  void AddTopSection(Section s) { article_.sections.push_back(std::move(s)); }

  static std::string TitleOr(const XmlNode& node, std::string fallback) {
    const std::string t = Collapsed(node.Child("title"));
    return t.empty() ? fallback : t;
  }

  // ---- front matter --------------------------------------------------------

  void ParseFront(const XmlNode& front,
                  std::vector<const XmlNode*>& extra_abstracts) {
    const XmlNode* meta = front.Child("article-meta");
    if (meta == nullptr) {
      Warn("MissingArticleMeta", "no <article-meta> in <front>", front);
      return;
    }
    for (const XmlNode* id : meta->Children("article-id")) {
      if (id->Attr("pub-id-type") == "doi") {
        const std::string doi = Collapsed(id);
        if (!doi.empty()) article_.id = doi;
      }
    }
    if (const XmlNode* tg = meta->Child("title-group")) {
      article_.title = Collapsed(tg->Child("article-title"));
    }
    for (const XmlNode* group : meta->Children("contrib-group")) {
      for (const XmlNode* contrib : group->Children("contrib")) {
        auto type = contrib->Attr("contrib-type");
        if (type && *type != "author") continue;
        if (auto name = ParsePersonName(*contrib)) {
          article_.authors.push_back(std::move(*name));
        }
      }
    }
    bool have_main = false;
    for (const XmlNode* abs : meta->Children("abstract")) {
      auto type = abs->Attr("abstract-type");
      if (!type && !have_main) {
        have_main = true;
        ParseAbstract(*abs);
      } else if (type && *type == "summary") {
        extra_abstracts.push_back(abs);
      } else {
        Warn("SkippedAbstract",
             "abstract of type '" + std::string(type.value_or("")) +
                 "' not shown as content",
             *abs);
      }
    }
  }

  std::optional<PersonName> ParsePersonName(const XmlNode& holder) {
    const XmlNode* name = holder.Child("name");
    if (name == nullptr) {
      if (const XmlNode* alt = holder.Child("name-alternatives")) {
        name = alt->Child("name");
      }
    }
    if (name != nullptr) {
      PersonName p;
      p.surname = Collapsed(name->Child("surname"));
      p.given = Collapsed(name->Child("given-names"));
      if (p.surname.empty()) {
        p.surname = Collapsed(name);
        p.given.clear();
        p.structured = false;
      }
      return p;
    }
    for (const char* alt : {"string-name", "collab"}) {
      if (const XmlNode* n = holder.Child(alt)) {
        PersonName p;
        p.surname = Collapsed(n);
        p.structured = false;
        if (!p.surname.empty()) return p;
      }
    }
    return std::nullopt;
  }

  void ParseAbstract(const XmlNode& abs) {
    // Paragraphs of a structured abstract are flattened into one block list;
    // the sub-headings (Background, Methods, ...) are labels, not content.
    std::function<void(const XmlNode&)> walk = [&](const XmlNode& node) {
      for (const auto& c : node.children) {
        if (!c.is_element()) continue;
        if (c.name == "p") {
          BlockBuilder b;
          AppendInline(c, b);
          if (!b.empty()) {
            article_.abstract.push_back(MakeBlock(
                "abs/b" + std::to_string(article_.abstract.size()), b,
                BlockKind::kParagraph));
          }
        } else if (c.name == "sec") {
          walk(c);
        } else if (c.name != "title" && c.name != "label") {
          Warn("UnknownElement", "unhandled <" + c.name + "> in abstract", c);
          BlockBuilder b;
          AppendInline(c, b);
          if (!b.empty()) {
            article_.abstract.push_back(MakeBlock(
                "abs/b" + std::to_string(article_.abstract.size()), b,
                BlockKind::kParagraph));
          }
        }
      }
    };
    walk(abs);
  }

  // ---- body ----------------------------------------------------------------

  void ParseBody(const XmlNode& body) {
    // Content outside any <sec> is gathered into untitled sections so every
    // block has an owning section.
    std::optional<Section> loose;
    auto flush_loose = [&] {
      if (loose) {
        AddTopSection(std::move(*loose));
        loose.reset();
      }
    };
    for (const auto& c : body.children) {
      if (!c.is_element()) continue;
      if (c.name == "sec") {
        flush_loose();
        AddTopSection(ParseSectionLike(c, NextTopId(), 1, TitleOr(c, "")));
        continue;
      }
      if (!loose) {
        loose.emplace();
        loose->id = NextTopId();
        loose->level = 1;
      }
      ParseSectionChild(c, *loose);
    }
    flush_loose();
  }

  void ParseBack(const XmlNode& back) {
    for (const auto& c : back.children) {
      if (!c.is_element()) continue;
      if (c.name == "ref-list") {
        ParseRefList(c);
      } else if (c.name == "ack") {
        AddTopSection(
            ParseSectionLike(c, NextTopId(), 1, TitleOr(c, "Acknowledgments")));
      } else if (c.name == "sec" || c.name == "glossary" || c.name == "notes") {
        AddTopSection(ParseSectionLike(c, NextTopId(), 1, TitleOr(c, "")));
      } else if (c.name == "app-group") {
        for (const XmlNode* app : c.Children("app")) {
          AddTopSection(
              ParseSectionLike(*app, NextTopId(), 1, TitleOr(*app, "Appendix")));
        }
      } else if (c.name == "fn-group") {
        AddTopSection(
            ParseSectionLike(c, NextTopId(), 1, TitleOr(c, "Footnotes")));
      } else if (c.name == "title" || c.name == "label") {
        continue;
      } else {
        Warn("UnknownElement", "unhandled <" + c.name + "> in <back>", c);
        AddTopSection(ParseSectionLike(c, NextTopId(), 1, TitleOr(c, "")));
      }
    }
  }

  Section ParseSectionLike(const XmlNode& node, std::string id, int level,
                           std::string heading) {
    Section s;
    s.id = std::move(id);
    s.level = level;
    s.deep = level > 2;
    s.heading = std::move(heading);
    for (const auto& c : node.children) {
      if (!c.is_element()) continue;
      if (c.name == "sec" || c.name == "boxed-text" || c.name == "app") {
        const std::string child_id =
            s.id + "." + std::to_string(s.children.size() + 1);
        std::string h = TitleOr(c, "");
        if (h.empty() && c.name == "boxed-text") {
          if (const XmlNode* cap = c.Child("caption")) {
            h = Collapsed(cap->Child("title"));
          }
        }
        s.children.push_back(ParseSectionLike(c, child_id, level + 1, h));
        continue;
      }
      ParseSectionChild(c, s);
    }
    return s;
  }

  void ParseSectionChild(const XmlNode& c, Section& s) {
    if (c.name == "title" || c.name == "label" || c.name == "sec-meta" ||
        c.name == "object-id" || c.name == "graphic") {
      return;
    }
    if (c.name == "p") {
      ParseParagraph(c, s);
    } else if (c.name == "fig") {
      ParseFigure(c, s);
    } else if (c.name == "table-wrap") {
      ParseTable(c, s);
    } else if (c.name == "fig-group" || c.name == "table-wrap-group") {
      for (const auto& g : c.children) {
        if (g.is_element()) ParseSectionChild(g, s);
      }
    } else if (c.name == "list") {
      for (const XmlNode* item : c.Children("list-item")) {
        for (const auto& ic : item->children) {
          if (ic.is_element()) ParseSectionChild(ic, s);
        }
      }
    } else if (c.name == "ref-list") {
      ParseRefList(c);
    } else if (c.name == "sec" || c.name == "boxed-text") {
      const std::string child_id =
          s.id + "." + std::to_string(s.children.size() + 1);
      s.children.push_back(
          ParseSectionLike(c, child_id, s.level + 1, TitleOr(c, "")));
    } else if (c.name == "supplementary-material" || c.name == "media" ||
               c.name == "fn" || c.name == "disp-formula" ||
               c.name == "disp-quote" || c.name == "preformat" ||
               c.name == "statement" || c.name == "def-list" ||
               c.name == "verse-group" || c.name == "speech" ||
               c.name == "code" || c.name == "glossary" ||
               c.name == "disp-formula-group" || c.name == "chem-struct-wrap" ||
               c.name == "array" || c.name == "alternatives") {
      BlockBuilder b;
      AppendInline(c, b);
      if (!b.empty()) FlushBlock(s, b, BlockKind::kParagraph);
    } else {
      Warn("UnknownElement", "unhandled <" + c.name + "> kept as text", c);
      BlockBuilder b;
      AppendInline(c, b);
      if (!b.empty()) FlushBlock(s, b, BlockKind::kParagraph);
    }
  }

  ContentBlock MakeBlock(std::string id, BlockBuilder& b, BlockKind kind) {
    ContentBlock block;
    block.id = std::move(id);
    block.kind = kind;
    block.text = b.text();
    for (auto& pm : b.marks()) {
      InlineCitationMark m;
      m.id = block.id + "/c" + std::to_string(block.marks.size());
      m.span = Span{block.id, pm.start, pm.end};
      m.target_ref_ids = std::move(pm.rids);
      mark_locations_[m.id] = {pm.line, pm.column};
      block.marks.push_back(std::move(m));
    }
    b.Reset();
    return block;
  }

  ContentBlock& FlushBlock(Section& s, BlockBuilder& b, BlockKind kind) {
    s.blocks.push_back(MakeBlock(
        s.id + "/b" + std::to_string(s.blocks.size()), b, kind));
    return s.blocks.back();
  }

  void ParseParagraph(const XmlNode& p, Section& s) {
    // Figures and tables nested in a paragraph split it: text before, the
    // float, then the remaining text as a new block.
    BlockBuilder b;
    for (const auto& c : p.children) {
      if (c.is_element() &&
          (c.name == "fig" || c.name == "table-wrap" ||
           c.name == "boxed-text" || c.name == "fig-group" ||
           c.name == "table-wrap-group")) {
        if (!b.empty()) FlushBlock(s, b, BlockKind::kParagraph);
        ParseSectionChild(c, s);
        continue;
      }
      AppendNode(c, b);
    }
    if (!b.empty()) FlushBlock(s, b, BlockKind::kParagraph);
  }

  void AppendCaption(const XmlNode& holder, BlockBuilder& b) {
    if (const XmlNode* label = holder.Child("label")) {
      AppendInline(*label, b);
      b.AppendText(" ");
    }
    if (const XmlNode* cap = holder.Child("caption")) {
      for (const auto& c : cap->children) {
        AppendNode(c, b);
        b.AppendText(" ");
      }
    }
  }

  void ParseFigure(const XmlNode& fig, Section& s) {
    BlockBuilder b;
    AppendCaption(fig, b);
    const ContentBlock& block = FlushBlock(s, b, BlockKind::kFigure);
    article_.figures.push_back(block.id);
  }

  void ParseTable(const XmlNode& wrap, Section& s) {
    BlockBuilder b;
    AppendCaption(wrap, b);
    if (const XmlNode* foot = wrap.Child("table-wrap-foot")) {
      AppendInline(*foot, b);
    }
    const XmlNode* table = wrap.Child("table");
    if (table == nullptr) {
      if (const XmlNode* alt = wrap.Child("alternatives")) {
        table = alt->Child("table");
      }
    }
    std::vector<std::vector<std::string>> cells;
    if (table != nullptr) {
      std::function<void(const XmlNode&)> rows = [&](const XmlNode& n) {
        for (const auto& c : n.children) {
          if (!c.is_element()) continue;
          if (c.name == "tr") {
            std::vector<std::string> row;
            for (const auto& cell : c.children) {
              if (cell.is_element() && (cell.name == "td" || cell.name == "th")) {
                row.push_back(Collapsed(&cell));
              }
            }
            cells.push_back(std::move(row));
          } else {
            rows(c);
          }
        }
      };
      rows(*table);
    }
    ContentBlock& block = FlushBlock(s, b, BlockKind::kTable);
    block.cells = std::move(cells);
    article_.figures.push_back(block.id);
  }

  // ---- inline content ------------------------------------------------------

  void AppendInline(const XmlNode& node, BlockBuilder& b) {
    for (const auto& c : node.children) AppendNode(c, b);
  }

  void AppendNode(const XmlNode& c, BlockBuilder& b) {
    if (c.is_text()) {
      b.AppendText(c.text);
      return;
    }
    if (c.name == "xref" && c.Attr("ref-type") == "bibr") {
      b.BeginMark();
      AppendInline(c, b);
      b.EndMark(SplitIds(c.Attr("rid").value_or("")), c.line, c.column);
      return;
    }
    if (c.name == "break") {
      b.AppendText(" ");
      return;
    }
    if (!IsKnownInline(c.name)) {
      Warn("UnknownElement", "unhandled inline <" + c.name + "> kept as text",
           c);
    }
    // Block-ish children inside inline content get word boundaries.
    const bool spaced = c.name == "p" || c.name == "title" ||
                        c.name == "list-item" || c.name == "td" ||
                        c.name == "th" || c.name == "tr";
    if (spaced) b.AppendText(" ");
    AppendInline(c, b);
    if (spaced) b.AppendText(" ");
  }

  // ---- references ----------------------------------------------------------

  void ParseRefList(const XmlNode& list) {
    for (const auto& c : list.children) {
      if (!c.is_element()) continue;
      if (c.name == "ref") {
        ParseRef(c);
      } else if (c.name == "ref-list") {
        ParseRefList(c);
      }
    }
  }

  void ParseRef(const XmlNode& ref) {
    Reference r;
    r.id = std::string(ref.Attr("id").value_or(""));
    r.original_number = static_cast<int>(article_.references.size()) + 1;
    if (r.id.empty()) {
      r.id = "ref" + std::to_string(r.original_number);
      Warn("MissingRefId", "reference without id; assigned " + r.id, ref);
    }
    if (FindReference(article_, r.id) != nullptr) {
      Warn("DuplicateRefId", "duplicate reference id '" + r.id + "'", ref);
    }
    r.label = Collapsed(ref.Child("label"));

    const XmlNode* cit = nullptr;
    for (const auto& c : ref.children) {
      if (c.is_element() &&
          (c.name == "element-citation" || c.name == "mixed-citation" ||
           c.name == "citation" || c.name == "nlm-citation")) {
        cit = &c;
        break;
      }
    }
    if (cit == nullptr) {
      if (const XmlNode* alt = ref.Child("citation-alternatives")) {
        for (const auto& c : alt->children) {
          if (c.is_element()) {
            cit = &c;
            break;
          }
        }
      }
    }
    if (cit == nullptr) {
      Warn("UnstructuredReference", "reference '" + r.id + "' has no citation",
           ref);
      r.title = Collapsed(&ref);
      article_.references.push_back(std::move(r));
      return;
    }

    bool have_group = false;
    for (const XmlNode* group : cit->Children("person-group")) {
      auto type = group->Attr("person-group-type");
      if (type && *type != "author") continue;
      have_group = true;
      CollectNames(*group, r.authors);
    }
    if (!have_group) CollectNames(*cit, r.authors);

    if (const XmlNode* year = cit->Find("year")) r.year = Collapsed(year);
    std::string title;
    for (const char* t : {"article-title", "chapter-title", "data-title"}) {
      if (const XmlNode* n = cit->Child(t)) {
        title = Collapsed(n);
        if (!title.empty()) break;
      }
    }
    const std::string source = Collapsed(cit->Child("source"));
    if (title.empty()) {
      r.title = source;
      r.source_venue = Collapsed(cit->Child("publisher-name"));
    } else {
      r.title = title;
      r.source_venue = source;
    }
    for (const XmlNode* pid : cit->Children("pub-id")) {
      if (pid->Attr("pub-id-type") == "doi") r.doi = Collapsed(pid);
    }
    article_.references.push_back(std::move(r));
  }

  void CollectNames(const XmlNode& holder, std::vector<PersonName>& out) {
    for (const auto& c : holder.children) {
      if (!c.is_element()) continue;
      if (c.name == "name") {
        PersonName p;
        p.surname = Collapsed(c.Child("surname"));
        p.given = Collapsed(c.Child("given-names"));
        if (p.surname.empty()) {
          p.surname = Collapsed(&c);
          p.given.clear();
          p.structured = false;
        }
        if (!p.surname.empty()) out.push_back(std::move(p));
      } else if (c.name == "string-name" || c.name == "collab") {
        PersonName p;
        if (c.Child("surname") != nullptr) {
          p.surname = Collapsed(c.Child("surname"));
          p.given = Collapsed(c.Child("given-names"));
        } else {
          p.surname = Collapsed(&c);
          p.structured = false;
        }
        if (!p.surname.empty()) out.push_back(std::move(p));
      }
    }
  }

  // ---- mark resolution -----------------------------------------------------

  void ResolveBlockMarks(ContentBlock& block,
                         const std::map<int, std::string>& by_number) {
    for (auto& m : block.marks) {
      std::vector<std::string> targets;
      auto add = [&](const std::string& id) {
        if (std::find(targets.begin(), targets.end(), id) == targets.end()) {
          targets.push_back(id);
        }
      };
      for (const auto& id : m.target_ref_ids) add(id);

      const auto display = utf8::Substr(block.text, m.span.start, m.span.end);
      auto numbers = ParseCitationNumbers(display.value_or(""));
      if (numbers) {
        const bool all_known =
            std::all_of(numbers->begin(), numbers->end(),
                        [&](int n) { return by_number.contains(n); });
        if (all_known) {
          for (int n : *numbers) add(by_number.at(n));
        }
      }

      bool resolved = !targets.empty();
      int first = 0;
      for (const auto& id : targets) {
        const Reference* r = FindReference(article_, id);
        if (r == nullptr) {
          resolved = false;
          auto loc = mark_locations_[m.id];
          warnings_.push_back({"DanglingCitation",
                               "mark " + m.id + " cites unknown reference '" +
                                   id + "'",
                               loc.first, loc.second});
          continue;
        }
        if (first == 0 || r->original_number < first) first = r->original_number;
      }
      if (targets.empty()) {
        auto loc = mark_locations_[m.id];
        warnings_.push_back({"DanglingCitation",
                             "mark " + m.id + " has no target reference",
                             loc.first, loc.second});
      }
      if (first == 0 && numbers && !numbers->empty()) first = numbers->front();
      m.target_ref_ids = std::move(targets);
      m.resolved = resolved;
      m.display_number = first;
    }
  }

  void ResolveMarks() {
    std::map<int, std::string> by_number;
    for (const auto& r : article_.references) {
      by_number.emplace(r.original_number, r.id);
    }
    for (auto& b : article_.abstract) ResolveBlockMarks(b, by_number);
    std::function<void(std::vector<Section>&)> walk =
        [&](std::vector<Section>& sections) {
          for (auto& s : sections) {
            for (auto& b : s.blocks) ResolveBlockMarks(b, by_number);
            walk(s.children);
          }
        };
    walk(article_.sections);
  }

  const RawSource& source_;
  Article article_;
  std::vector<Warning> warnings_;
  std::map<std::string, std::pair<long, long>> mark_locations_;
};

void SplitBlock(const Article& article, ContentBlock& block) {
  std::vector<InlineCitationMark> out;
  out.reserve(block.marks.size());
  for (auto& m : block.marks) {
    if (m.target_ref_ids.size() <= 1) {
      out.push_back(std::move(m));
      continue;
    }
    std::vector<const Reference*> known;
    std::vector<std::string> unknown;
    for (const auto& id : m.target_ref_ids) {
      if (const Reference* r = FindReference(article, id)) {
        if (std::find(known.begin(), known.end(), r) == known.end()) {
          known.push_back(r);
        }
      } else if (std::find(unknown.begin(), unknown.end(), id) ==
                 unknown.end()) {
        unknown.push_back(id);
      }
    }
    std::sort(known.begin(), known.end(),
              [](const Reference* a, const Reference* b) {
                return a->original_number < b->original_number;
              });
    size_t k = 0;
    for (const Reference* r : known) {
      InlineCitationMark s;
      s.id = m.id + "." + std::to_string(k++);
      s.span = m.span;
      s.target_ref_ids = {r->id};
      s.display_number = r->original_number;
      s.resolved = true;
      out.push_back(std::move(s));
    }
    for (const auto& id : unknown) {
      InlineCitationMark s;
      s.id = m.id + "." + std::to_string(k++);
      s.span = m.span;
      s.target_ref_ids = {id};
      s.display_number = 0;
      s.resolved = false;
      out.push_back(std::move(s));
    }
  }
  block.marks = std::move(out);
}

void SplitSections(const Article& article, std::vector<Section>& sections) {
  for (auto& s : sections) {
    for (auto& b : s.blocks) SplitBlock(article, b);
    SplitSections(article, s.children);
  }
}

}  // namespace

std::optional<std::vector<int>> ParseCitationNumbers(std::string_view display) {
  // Tokens: numbers, dashes, list separators. Brackets and spaces are noise.
  struct Tok {
    enum { kNum, kDash, kSep } kind;
    int value = 0;
  };
  std::vector<Tok> toks;
  const auto cps = utf8::Decode(display);
  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (cp >= '0' && cp <= '9') {
      long v = 0;
      while (i < cps.size() && cps[i] >= '0' && cps[i] <= '9') {
        v = v * 10 + static_cast<long>(cps[i] - '0');
        if (v > 1000000) return std::nullopt;
        ++i;
      }
      --i;
      toks.push_back({Tok::kNum, static_cast<int>(v)});
    } else if (IsDash(cp)) {
      toks.push_back({Tok::kDash});
    } else if (cp == ',' || cp == ';') {
      toks.push_back({Tok::kSep});
    } else if (cp == '[' || cp == ']' || cp == '(' || cp == ')' ||
               cp == ' ' || cp == 0xA0 || cp == 0x2009 || cp == '\t') {
      continue;
    } else {
      return std::nullopt;
    }
  }
  // item := NUM | NUM DASH NUM ; group := item (SEP item)*
  std::vector<int> out;
  size_t i = 0;
  while (true) {
    if (i >= toks.size() || toks[i].kind != Tok::kNum) return std::nullopt;
    const int lo = toks[i].value;
    ++i;
    if (i < toks.size() && toks[i].kind == Tok::kDash) {
      ++i;
      if (i >= toks.size() || toks[i].kind != Tok::kNum) return std::nullopt;
      const int hi = toks[i].value;
      ++i;
      if (hi < lo || hi - lo > kMaxRangeWidth) return std::nullopt;
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(lo);
    }
    if (i == toks.size()) break;
    if (toks[i].kind != Tok::kSep) return std::nullopt;
    ++i;
  }
  if (out.empty() || out.front() <= 0) return std::nullopt;
  for (int n : out) {
    if (n <= 0) return std::nullopt;
  }
  return out;
}

ParsedArticle ParseArticleWithWarnings(const RawSource& source) {
  return JatsSegmenter(source).Run();
}

Article ParseArticle(const RawSource& source) {
  return ParseArticleWithWarnings(source).article;
}

Article SplitGroupedCitations(const Article& article) {
  Article out = article;
  for (auto& b : out.abstract) SplitBlock(article, b);
  SplitSections(article, out.sections);
  return out;
}

std::string PlainText(const Article& article) {
  std::string out;
  auto add = [&](std::string_view piece) {
    std::string norm = utf8::CollapseWhitespace(piece);
    if (norm.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out += norm;
  };
  for (const auto& b : article.abstract) add(b.text);
  ForEachSection(article, [&](const Section& s) {
    add(s.heading);
    for (const auto& b : s.blocks) add(b.text);
  });
  return out;
}

IngestResult Ingest(const RawSource& source) {
  ParsedArticle parsed = ParseArticleWithWarnings(source);
  IngestResult result;
  result.report.article_id = parsed.article.id;
  result.report.sections_found = CountSections(parsed.article);
  result.report.references_found = parsed.article.references.size();
  result.report.citation_marks_found = CountMarks(parsed.article);
  ForEachBlock(parsed.article, [&](const ContentBlock& b) {
    for (const auto& m : b.marks) {
      if (m.target_ref_ids.size() > 1) ++result.report.grouped_marks_split;
    }
  });
  result.report.warnings = std::move(parsed.warnings);
  result.article = SplitGroupedCitations(parsed.article);
  return result;
}

}  // namespace scibrowse
