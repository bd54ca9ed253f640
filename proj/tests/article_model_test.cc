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

#include "scibrowse/article.h"

#include "gtest/gtest.h"
#include "scibrowse/article_json.h"
#include "scibrowse/utf8.h"
#include "test_support.h"

namespace scibrowse {
namespace {

Article Small() {
  Article a;
  a.id = "doc";
  a.abstract.push_back({"abs/b0", BlockKind::kParagraph, "Summary.", {}, {}});
  Section s1{"s1", 1, "Intro", false, {}, {}};
  s1.blocks.push_back({"s1/b0", BlockKind::kParagraph, "NMNAT protects axons",
                       {}, {}});
  Section s2{"s2", 1, "Results", false, {}, {}};
  Section s21{"s2.1", 2, "R1", false, {}, {}};
  for (int i = 0; i < 5; ++i) {
    s21.blocks.push_back({"s2.1/b" + std::to_string(i), BlockKind::kParagraph,
                          "text", {}, {}});
  }
  s2.children.push_back(s21);
  a.sections = {s1, s2};
  return a;
}

TEST(ResolveSpanTest, Substring) {
  Article a = Small();
  EXPECT_EQ(ResolveSpan(a, {"s1/b0", 0, 5}), "NMNAT");
  EXPECT_EQ(ResolveSpan(a, {"s1/b0", 3, 3}), "");
}

TEST(ResolveSpanTest, Errors) {
  Article a = Small();
  try {
    ResolveSpan(a, {"s1/b0", 0, 99});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
  }
  try {
    ResolveSpan(a, {"s1/b0", 4, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
  }
  try {
    ResolveSpan(a, {"nope", 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownBlock);
  }
  EXPECT_FALSE(SpanResolves(a, {"s1/b0", 0, 99}));
  EXPECT_TRUE(SpanResolves(a, {"s1/b0", 0, 20}));
}

TEST(SectionOfTest, Lookups) {
  Article a = Small();
  EXPECT_EQ(SectionOf(a, "s2.1/b4").id, "s2.1");
  EXPECT_EQ(SectionOf(a, "s1/b0").id, "s1");
  try {
    SectionOf(a, "s9/b0");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownBlock);
  }
  EXPECT_THROW(SectionOf(a, "abs/b0"), Error);
  auto path = SectionPath(a, "s2.1/b0");
  ASSERT_EQ(path.size(), 2u);
  EXPECT_EQ(path[0]->id, "s2");
  EXPECT_EQ(path[1]->id, "s2.1");
}

TEST(DocumentOrderTest, AbstractThenDepthFirst) {
  Article a = Small();
  std::vector<std::string> order;
  ForEachBlock(a, [&](const ContentBlock& b) { order.push_back(b.id); });
  ASSERT_EQ(order.size(), 7u);
  EXPECT_EQ(order[0], "abs/b0");
  EXPECT_EQ(order[1], "s1/b0");
  EXPECT_EQ(order[2], "s2.1/b0");
  for (size_t i = 0; i < order.size(); ++i) {
    EXPECT_EQ(BlockPosition(a, order[i]), i);
  }
  EXPECT_EQ(BlockPosition(a, "zzz"), std::nullopt);
  EXPECT_TRUE(SpanBefore(a, {"s1/b0", 5, 6}, {"s2.1/b0", 0, 1}));
  EXPECT_TRUE(SpanBefore(a, {"s1/b0", 1, 2}, {"s1/b0", 1, 3}));
  EXPECT_FALSE(SpanBefore(a, {"s1/b0", 1, 3}, {"s1/b0", 1, 3}));
  EXPECT_TRUE(IsAbstractBlock(a, "abs/b0"));
  EXPECT_FALSE(IsAbstractBlock(a, "s1/b0"));
  EXPECT_EQ(CountSections(a), 3u);
}

TEST(ArticleJsonTest, RoundTripAndCorruption) {
  Article a = Small();
  a.references.push_back({"B1", 1, "1", {{"Zhai", "G", true}}, "2006", "t",
                          "PLoS Biol", std::string("10.1/x")});
  a.sections[0].blocks[0].marks.push_back(
      {"s1/b0/c0", {"s1/b0", 0, 5}, {"B1"}, 1, true});
  EXPECT_EQ(ArticleFromJson(ArticleToJson(a)), a);
  Json j = ArticleToJson(a);
  j["sections"][0]["blocks"][0].erase("text");
  try {
    ArticleFromJson(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptStore);
    EXPECT_NE(std::string(e.what()).find("text"), std::string::npos);
  }
}

TEST(Utf8Test, Basics) {
  EXPECT_EQ(utf8::Length("αβc"), 3u);
  EXPECT_EQ(utf8::Substr("αβc", 1, 3), "βc");
  EXPECT_EQ(utf8::Substr("αβc", 1, 4), std::nullopt);
  EXPECT_EQ(utf8::CollapseWhitespace("  a \t\n b  "), "a b");
  EXPECT_EQ(utf8::FoldCase("ÁVILA Straße"), "ávila straße");
  EXPECT_EQ(utf8::Decode("\xff").size(), 1u);
}

}  // namespace
}  // namespace scibrowse
