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

#include <regex>

#include "gtest/gtest.h"
#include "scibrowse/article_json.h"
#include "scibrowse/utf8.h"
#include "test_support.h"

namespace scibrowse {
namespace {

using testing::JatsBuilder;
using testing::Xref;

std::string MinimalXml() {
  return JatsBuilder()
      .BeginSection("Introduction")
      .Paragraph("NMNAT protects axons " + Xref("B1", "[1]") + ".")
      .EndSection()
      .Ref({"B1", "Zhai", "G", "2006", "NMNAT maintains neural integrity"})
      .Build();
}

TEST(IngestTest, MinimalDocument) {
  auto parsed = ParseArticleWithWarnings({"x", MinimalXml()});
  const Article& a = parsed.article;
  EXPECT_TRUE(parsed.warnings.empty());
  EXPECT_EQ(a.id, "10.0000/test.0001");
  ASSERT_EQ(a.sections.size(), 1u);
  EXPECT_EQ(a.sections[0].heading, "Introduction");
  EXPECT_EQ(a.references.size(), 1u);
  EXPECT_EQ(CountMarks(a), 1u);
  const auto& mark = a.sections[0].blocks[0].marks[0];
  EXPECT_EQ(mark.id, "s1/b0/c0");
  EXPECT_EQ(ResolveSpan(a, mark.span), "[1]");
  EXPECT_EQ(mark.target_ref_ids, std::vector<std::string>{"B1"});
  EXPECT_TRUE(mark.resolved);
  EXPECT_EQ(mark.display_number, 1);
}

TEST(IngestTest, DanglingCitationIsWarningAndUnresolved) {
  const std::string xml =
      JatsBuilder()
          .BeginSection("Introduction")
          .Paragraph("See " + Xref("B99", "[99]") + ".")
          .EndSection()
          .Ref({"B1", "Zhai", "G", "2006", "t"})
          .Build();
  auto parsed = ParseArticleWithWarnings({"x", xml});
  ASSERT_EQ(parsed.warnings.size(), 1u);
  EXPECT_EQ(parsed.warnings[0].code, "DanglingCitation");
  EXPECT_GT(parsed.warnings[0].line, 0);
  const auto& mark = parsed.article.sections[0].blocks[0].marks[0];
  EXPECT_FALSE(mark.resolved);
}

TEST(IngestTest, MalformedXmlThrowsWithPosition) {
  try {
    ParseArticle({"x", "<article><body><p>unclosed</body></article>"});
    FAIL() << "expected MalformedXml";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedXml);
    EXPECT_GT(e.line(), 0);
  }
}

TEST(IngestTest, NonJatsRootIsUnrecognized) {
  try {
    ParseArticle({"x", "<html><body/></html>"});
    FAIL() << "expected UnrecognizedSchema";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnrecognizedSchema);
  }
}

TEST(IngestTest, DeepSectionsAreKeptAndFlagged) {
  const std::string xml = JatsBuilder()
                              .BeginSection("Results")
                              .BeginSection("R1")
                              .BeginSection("R1a")
                              .Paragraph("deep")
                              .Build();
  Article a = ParseArticle({"x", xml});
  const Section* deep = FindSection(a, "s1.1.1");
  ASSERT_NE(deep, nullptr);
  EXPECT_EQ(deep->level, 3);
  EXPECT_TRUE(deep->deep);
  EXPECT_FALSE(FindSection(a, "s1.1")->deep);
}

TEST(IngestTest, ReferencesKeepSourceOrder) {
  const std::string xml = JatsBuilder()
                              .Ref({"Z", "Zhai", "G", "2006", "a"})
                              .Ref({"A", "Allen", "B", "2007", "b"})
                              .Ref({"G", "Gosby", "C", "2011", "c"})
                              .Build();
  Article a = ParseArticle({"x", xml});
  ASSERT_EQ(a.references.size(), 3u);
  EXPECT_EQ(a.references[0].id, "Z");
  EXPECT_EQ(a.references[1].id, "A");
  EXPECT_EQ(a.references[2].original_number, 3);
  EXPECT_EQ(a.references[1].authors[0].surname, "Allen");
}

TEST(IngestTest, UnicodeOffsetsCountCodePoints) {
  const std::string xml =
      JatsBuilder()
          .BeginSection("Intro")
          .Paragraph("α-synuclein β " + Xref("B1", "[1]"))
          .Ref({"B1", "Ávila", "J", "2001", "t"})
          .Build();
  Article a = ParseArticle({"x", xml});
  const auto& mark = a.sections[0].blocks[0].marks[0];
  EXPECT_EQ(mark.span.start, 14u);  // 14 code points, 16 bytes
  EXPECT_EQ(ResolveSpan(a, mark.span), "[1]");
  EXPECT_EQ(a.references[0].authors[0].surname, "Ávila");
}

TEST(IngestTest, DashJoinedXrefsMergeIntoRange) {
  const std::string xml =
      JatsBuilder()
          .BeginSection("Intro")
          .Paragraph("x " + Xref("B2", "[2]") + "–" + Xref("B4", "[4]") + " y")
          .Ref({"B1", "A", "", "2000", "a"})
          .Ref({"B2", "B", "", "2000", "b"})
          .Ref({"B3", "C", "", "2000", "c"})
          .Ref({"B4", "D", "", "2000", "d"})
          .Build();
  Article a = ParseArticle({"x", xml});
  const auto& marks = a.sections[0].blocks[0].marks;
  ASSERT_EQ(marks.size(), 1u);
  EXPECT_EQ(ResolveSpan(a, marks[0].span), "[2]–[4]");
  std::set<std::string> targets(marks[0].target_ref_ids.begin(),
                                marks[0].target_ref_ids.end());
  EXPECT_EQ(targets, (std::set<std::string>{"B2", "B3", "B4"}));
}

// A mark "[4–6]" over refs 4,5,6 splits into three single-target marks.
TEST(SplitGroupedCitationsTest, RangeSplitsInOrder) {
  JatsBuilder jb;
  jb.BeginSection("Intro").Paragraph("x " + Xref("B4", "[4–6]"));
  for (int i = 1; i <= 6; ++i) {
    jb.Ref({"B" + std::to_string(i), "S" + std::to_string(i), "", "2000", "t"});
  }
  Article split = SplitGroupedCitations(ParseArticle({"x", jb.Build()}));
  const auto& marks = split.sections[0].blocks[0].marks;
  ASSERT_EQ(marks.size(), 3u);
  const std::vector<std::string> want = {"B4", "B5", "B6"};
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(marks[i].target_ref_ids, std::vector<std::string>{want[i]});
    EXPECT_EQ(marks[i].id, "s1/b0/c0." + std::to_string(i));
    EXPECT_EQ(marks[i].display_number, static_cast<int>(4 + i));
    EXPECT_EQ(marks[i].span, marks[0].span);
  }
}

TEST(SplitGroupedCitationsTest, SingleTargetUnchanged) {
  Article a = ParseArticle({"x", MinimalXml()});
  EXPECT_EQ(SplitGroupedCitations(a), a);
}

TEST(SplitGroupedCitationsTest, ListIsOrderedByOriginalNumber) {
  JatsBuilder jb;
  jb.BeginSection("Intro").Paragraph("x " + Xref("B7 B3", "[7,3]"));
  for (int i = 1; i <= 7; ++i) {
    jb.Ref({"B" + std::to_string(i), "S", "", "2000", "t"});
  }
  Article split = SplitGroupedCitations(ParseArticle({"x", jb.Build()}));
  const auto& marks = split.sections[0].blocks[0].marks;
  ASSERT_EQ(marks.size(), 2u);
  EXPECT_EQ(marks[0].target_ref_ids[0], "B3");
  EXPECT_EQ(marks[1].target_ref_ids[0], "B7");
}

TEST(SplitGroupedCitationsTest, Idempotent) {
  JatsBuilder jb;
  jb.BeginSection("Intro").Paragraph(Xref("B1 B2", "[1,2]"));
  jb.Ref({"B1", "S", "", "2000", "t"}).Ref({"B2", "S", "", "2000", "t"});
  Article once = SplitGroupedCitations(ParseArticle({"x", jb.Build()}));
  EXPECT_EQ(SplitGroupedCitations(once), once);
}

TEST(ParseCitationNumbersTest, Forms) {
  EXPECT_EQ(ParseCitationNumbers("[3]"), (std::vector<int>{3}));
  EXPECT_EQ(ParseCitationNumbers("4–6"), (std::vector<int>{4, 5, 6}));
  EXPECT_EQ(ParseCitationNumbers("[7,3]"), (std::vector<int>{7, 3}));
  EXPECT_EQ(ParseCitationNumbers("[2]-[4]"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(ParseCitationNumbers("Smith et al."), std::nullopt);
  EXPECT_EQ(ParseCitationNumbers(""), std::nullopt);
}

TEST(PlainTextTest, NormalizesWhitespace) {
  Article a;
  Section s;
  s.id = "s1";
  ContentBlock b;
  b.id = "s1/b0";
  b.text = "a  b\n c";
  s.blocks.push_back(b);
  a.sections.push_back(s);
  EXPECT_EQ(PlainText(a), "a b c");
}

TEST(PlainTextTest, EmptyArticle) { EXPECT_EQ(PlainText(Article{}), ""); }

TEST(PlainTextTest, SectionsInOrder) {
  Article a = ParseArticle(
      {"x", JatsBuilder()
                .BeginSection("A")
                .Paragraph("first para")
                .EndSection()
                .BeginSection("B")
                .Paragraph("second para")
                .Build()});
  EXPECT_EQ(PlainText(a), "A first para B second para");
}

// Determinism, offset validity, text preservation and JSON round trip on
// the real fixtures.
class FixtureTest : public ::testing::TestWithParam<const char*> {};

TEST_P(FixtureTest, StructuralProperties) {
  const std::string bytes = testing::ReadFile(testing::FixturePath(GetParam()));
  ASSERT_FALSE(bytes.empty());
  Article a = ParseArticle({GetParam(), bytes});
  EXPECT_EQ(a, ParseArticle({GetParam(), bytes}));

  ForEachBlock(a, [&](const ContentBlock& b) {
    const size_t len = utf8::Length(b.text);
    size_t prev = 0;
    for (const auto& m : b.marks) {
      EXPECT_LE(m.span.start, m.span.end) << m.id;
      EXPECT_LE(m.span.end, len) << m.id;
      EXPECT_GE(m.span.start, prev) << m.id;
      prev = m.span.start;
    }
  });

  // Source ref-list order, counted by an independent scan of the bytes.
  std::regex ref_re("<ref id=\"([^\"]+)\"");
  std::vector<std::string> ids;
  for (auto it = std::sregex_iterator(bytes.begin(), bytes.end(), ref_re);
       it != std::sregex_iterator(); ++it) {
    ids.push_back((*it)[1]);
  }
  ASSERT_EQ(a.references.size(), ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    EXPECT_EQ(a.references[i].id, ids[i]);
    EXPECT_EQ(a.references[i].original_number, static_cast<int>(i + 1));
  }

  Article back = ArticleFromJson(Json::parse(CanonicalDump(ArticleToJson(a))));
  EXPECT_EQ(back, a);
  EXPECT_EQ(PlainText(back), PlainText(a));
}

INSTANTIATE_TEST_SUITE_P(Plos, FixtureTest,
                         ::testing::Values("pone.0000217.xml",
                                           "pone.0046493.xml",
                                           "pntd.0002065.xml"));

}  // namespace
}  // namespace scibrowse
