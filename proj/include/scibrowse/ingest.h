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

// JATS (PLOS flavour) ingestion.
//
// Accepted subset: article/front/article-meta (title, contributors,
// abstract, DOI), body//sec at any depth, p, fig, table-wrap,
// back/ref-list/ref and xref[@ref-type="bibr"]. Boxed text, appendices,
// acknowledgments and author summaries become ordinary sections. Unknown
// elements are kept as opaque text and reported as warnings.
//
// Citation marks. A bibr xref becomes one mark spanning its display text.
// Two bibr xrefs separated only by a dash ("[4]–[6]") merge into one range
// mark. A mark's target_ref_ids list every reference it designates: the ids
// in its rid attribute plus, when the display text is a numeric group
// ("4,7", "4–6", "[2]-[5]") whose numbers all exist, the references with
// those original numbers.

#ifndef SCIBROWSE_INGEST_H_
#define SCIBROWSE_INGEST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scibrowse/article.h"
#include "scibrowse/error.h"

namespace scibrowse {

struct RawSource {
  std::string article_id;  // DOI or file stem; the DOI in the file wins
  std::string bytes;
  std::string format_tag = "jats_xml";
};

struct IngestReport {
  std::string article_id;
  size_t sections_found = 0;
  size_t references_found = 0;
  size_t citation_marks_found = 0;  // before splitting
  size_t grouped_marks_split = 0;
  std::vector<Warning> warnings;
};

struct ParsedArticle {
  Article article;
  std::vector<Warning> warnings;
};

// Throws Error(kMalformedXml) or Error(kUnrecognizedSchema). Dangling
// citations are warnings; the mark is kept with resolved = false.
ParsedArticle ParseArticleWithWarnings(const RawSource& source);
Article ParseArticle(const RawSource& source);

// Replaces every multi-target mark by single-target marks at the same span,
// ordered by ascending original number (unresolved targets last). Ids become
// "<mark id>.<k>". Idempotent.
Article SplitGroupedCitations(const Article& article);

// Section headings and block texts in document order, each whitespace
// normalized, joined by single spaces.
std::string PlainText(const Article& article);

struct IngestResult {
  Article article;
  IngestReport report;
};

// Parse followed by grouped-citation splitting.
IngestResult Ingest(const RawSource& source);

// Numbers written in a citation display text: "[3]" -> {3}, "4–6" ->
// {4,5,6}, "[7,3]" -> {7,3}, "[2]-[4]" -> {2,3,4}. nullopt when the text is
// not a purely numeric group.
std::optional<std::vector<int>> ParseCitationNumbers(std::string_view display);

}  // namespace scibrowse

#endif  // SCIBROWSE_INGEST_H_
