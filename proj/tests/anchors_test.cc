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

#include "scibrowse/anchors.h"

#include "gtest/gtest.h"
#include "scibrowse/article_json.h"
#include "scibrowse/article_store.h"
#include "scibrowse/ingest.h"
#include "test_support.h"

namespace scibrowse {
namespace {

constexpr char kCited[] = "10.9999/neuro.cited.0001";
constexpr char kCiting[] = "10.9999/neuro.citing.0002";
constexpr char kTopic[] = "light-induced neurodegeneration";

// Span of the first occurrence of `needle` in an ASCII block.
Span Find(const Article& a, const std::string& block_id,
          const std::string& needle) {
  const std::string& text = GetBlock(a, block_id).text;
  const size_t at = text.find(needle);
  EXPECT_NE(at, std::string::npos) << needle << " in " << block_id;
  return {block_id, at, at + needle.size()};
}

class AnchorsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const char* name : {"neuro_cited.xml", "neuro_citing.xml"}) {
      ArticleStore s;
      s.article =
          Ingest({name, testing::ReadFile(testing::FixturePath(name))}).article;
      stores_[s.article.id] = std::move(s);
    }
    for (const auto& cmd : testing::Fig3Commands()) {
      ApplyKbCommand(stores_[kCited], cmd);
    }
  }

  StoreLookup Lookup() const {
    return [this](const std::string& id) -> const ArticleStore* {
      auto it = stores_.find(id);
      return it == stores_.end() ? nullptr : &it->second;
    };
  }

  const Article& cited() { return stores_[kCited].article; }

  // Anchor on the mid-paper introduction plus two later mentions, added
  // out of document order.
  std::string LightAnchor() {
    const Anchor& a = index_.RegisterAnchor(
        Lookup(), kCited, Find(cited(), "s2.2/b0", kTopic), kTopic);
    index_.AddMention(Lookup(), a.id, Find(cited(), "s3/b0", kTopic));
    index_.AddMention(Lookup(), a.id, Find(cited(), "s2.2/b1", kTopic));
    return a.id;
  }

  void ExpectCode(const std::function<void()>& fn, ErrorCode code) {
    try {
      fn();
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(ErrorCodeName(e.code()), ErrorCodeName(code)) << e.what();
    }
  }

  std::map<std::string, ArticleStore> stores_;
  AnchorIndex index_;
};

TEST_F(AnchorsTest, RegisterTargets) {
  EXPECT_FALSE(LightAnchor().empty());
  const Anchor& flow_anchor = index_.RegisterAnchor(
      Lookup(), kCited, std::string("fig3_nad_dependent"), "NAD model");
  EXPECT_EQ(std::get<std::string>(flow_anchor.target), "fig3_nad_dependent");
  ExpectCode([&] {
    index_.RegisterAnchor(Lookup(), kCited, Span{"s9/b9", 0, 1}, "x");
  }, ErrorCode::kUnknownTarget);
  ExpectCode([&] {
    index_.RegisterAnchor(Lookup(), kCited, std::string("ghost"), "x");
  }, ErrorCode::kUnknownTarget);
  ExpectCode([&] {
    index_.RegisterAnchor(Lookup(), "nope", std::string("x"), "x");
  }, ErrorCode::kUnknownArticle);
  ExpectCode([&] {
    index_.RegisterAnchor(Lookup(), kCited, std::string("NAD"), "x",
                          flow_anchor.id);
  }, ErrorCode::kDuplicateId);
}

TEST_F(AnchorsTest, SummaryForMidPaperTopic) {
  const std::string id = LightAnchor();
  ContextSummary s = index_.Summarize(Lookup(), id);
  ASSERT_EQ(s.entries.size(), 4u);
  EXPECT_EQ(s.entries[0].kind, SummaryEntryKind::kFirstIntroduction);
  EXPECT_EQ(s.entries[0].span->block_id, "s2.2/b0");
  EXPECT_EQ(s.entries[1].kind, SummaryEntryKind::kLaterMention);
  EXPECT_EQ(s.entries[1].span->block_id, "s2.2/b1");
  EXPECT_EQ(s.entries[2].span->block_id, "s3/b0");
  EXPECT_EQ(s.entries[3].kind, SummaryEntryKind::kAbstractPresence);
  EXPECT_FALSE(s.entries[3].present);
  for (const auto& e : s.entries) {
    if (e.span) EXPECT_EQ(e.excerpt, ResolveSpan(cited(), *e.span));
  }
  EXPECT_EQ(CompactDump(ToJson(s)), CompactDump(ToJson(index_.Summarize(Lookup(), id))));
}

TEST_F(AnchorsTest, MinimalSummaryAndAbstractPresence) {
  const Anchor& a = index_.RegisterAnchor(
      Lookup(), kCited, Find(cited(), "abs/b0", "neurodegeneration"),
      "neurodegeneration");
  ContextSummary s = index_.Summarize(Lookup(), a.id);
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[0].kind, SummaryEntryKind::kFirstIntroduction);
  EXPECT_TRUE(s.entries[1].present);
  EXPECT_EQ(s.entries[1].excerpt, "neurodegeneration");
}

TEST_F(AnchorsTest, RelatedFlowsAndBlocks) {
  const std::string id = LightAnchor();
  Json ab = {{"op", "define_activity_block"},
             {"id", "ab_light"},
             {"goal_label", "does light drive degeneration"},
             {"goal_span", nullptr},
             {"method_flow_ids", {"disable_nad_synthesis"}},
             {"result_spans", Json::array()}};
  ab["goal_span"] = SpanToJson(Find(cited(), "s2.2/b0", "Flies raised"));
  ab["result_spans"].push_back(SpanToJson(Find(cited(), "s2.2/b1", kTopic)));
  ApplyKbCommand(stores_[kCited], ab);
  ContextSummary s = index_.Summarize(Lookup(), id);
  std::vector<SummaryEntryKind> kinds;
  for (const auto& e : s.entries) kinds.push_back(e.kind);
  EXPECT_EQ(kinds, (std::vector<SummaryEntryKind>{
                       SummaryEntryKind::kFirstIntroduction,
                       SummaryEntryKind::kLaterMention,
                       SummaryEntryKind::kLaterMention,
                       SummaryEntryKind::kRelatedFlow,
                       SummaryEntryKind::kRelatedBlock,
                       SummaryEntryKind::kAbstractPresence}));
  EXPECT_EQ(s.entries[3].element, "disable_nad_synthesis");
  EXPECT_EQ(s.entries[4].element, "ab_light");

  const Anchor& model = index_.RegisterAnchor(
      Lookup(), kCited, std::string("NAD"), "NAD availability");
  ContextSummary ms = index_.Summarize(Lookup(), model.id);
  ASSERT_EQ(ms.entries.size(), 2u);
  EXPECT_EQ(ms.entries[0].element, "fig3_nad_dependent");
  EXPECT_EQ(ms.entries[1].kind, SummaryEntryKind::kAbstractPresence);
}

TEST_F(AnchorsTest, MentionsDeduplicated) {
  const std::string id = LightAnchor();
  const size_t n = index_.mentions().size();
  index_.AddMention(Lookup(), id, Find(cited(), "s3/b0", kTopic));
  EXPECT_EQ(index_.mentions().size(), n);
  ExpectCode([&] { index_.AddMention(Lookup(), "ghost", Span{"s1/b0", 0, 1}); },
             ErrorCode::kUnknownAnchor);
  ExpectCode([&] { index_.AddMention(Lookup(), id, Span{"s1/b0", 0, 9999}); },
             ErrorCode::kUnknownSpan);
}

TEST_F(AnchorsTest, LinksAndBacklinks) {
  const std::string id = LightAnchor();
  EXPECT_TRUE(index_.Backlinks(Lookup(), kCited).empty());
  const CitationLink& late =
      index_.LinkCitation(Lookup(), kCiting, "s2/b0/c0", id, "uses_method");
  EXPECT_EQ(index_.Backlinks(Lookup(), kCited).size(), 1u);
  const std::string late_id = late.id;
  index_.LinkCitation(Lookup(), kCiting, "s1/b0/c0", id, "cites_as_evidence");
  auto back = index_.Backlinks(Lookup(), kCited);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].citing_mark_id, "s1/b0/c0");
  EXPECT_EQ(back[1].citing_mark_id, "s2/b0/c0");

  const CitationLink& again =
      index_.LinkCitation(Lookup(), kCiting, "s2/b0/c0", id, "discusses");
  EXPECT_EQ(again.id, late_id);
  EXPECT_EQ(again.role, "uses_method");
  EXPECT_EQ(index_.Backlinks(Lookup(), kCited).size(), 2u);

  ExpectCode([&] {
    index_.LinkCitation(Lookup(), kCiting, "s1/b0/c1", id, "frobnicates");
  }, ErrorCode::kUnknownRole);
  ExpectCode([&] {
    index_.LinkCitation(Lookup(), kCiting, "s1/b0/c9", id, "extends");
  }, ErrorCode::kUnknownMark);
  ExpectCode([&] {
    index_.LinkCitation(Lookup(), kCiting, "s1/b0/c1", "ghost", "extends");
  }, ErrorCode::kUnknownAnchor);
  index_.AddRole("frobnicates");
  EXPECT_NO_THROW(
      index_.LinkCitation(Lookup(), kCiting, "s1/b0/c1", id, "frobnicates"));
}

TEST_F(AnchorsTest, ExportImportIsAtomic) {
  const std::string id = LightAnchor();
  index_.LinkCitation(Lookup(), kCiting, "s1/b0/c0", id, "extends");
  index_.LinkCitation(Lookup(), kCiting, "s2/b0/c0", id, "extends");
  const std::string lines = index_.ExportLinks();

  AnchorIndex fresh;
  fresh.RegisterAnchor(Lookup(), kCited, index_.anchors().at(id).target, kTopic,
                       id);
  const AnchorIndex before = fresh;
  const std::string broken =
      lines + "{\"id\":\"link-x\",\"citing_article_id\":\"" + kCiting +
      "\",\"citing_mark_id\":\"s9/b0/c0\",\"anchor_id\":\"" + id +
      "\",\"role\":\"extends\"}\n";
  ExpectCode([&] { fresh.ImportLinks(Lookup(), broken); }, ErrorCode::kUnknownMark);
  EXPECT_EQ(fresh, before);
  EXPECT_EQ(fresh.ImportLinks(Lookup(), lines), 2u);
  EXPECT_EQ(fresh.ImportLinks(Lookup(), lines), 0u);
  EXPECT_EQ(fresh.ExportLinks(), lines);
}

TEST_F(AnchorsTest, JsonRoundTrip) {
  const std::string id = LightAnchor();
  index_.LinkCitation(Lookup(), kCiting, "s1/b0/c0", id, "extends");
  AnchorIndex back = AnchorIndex::FromJson(Json::parse(CanonicalDump(index_.ToJson())));
  EXPECT_EQ(back, index_);
  EXPECT_EQ(CompactDump(ToJson(back.Summarize(Lookup(), id))),
            CompactDump(ToJson(index_.Summarize(Lookup(), id))));
}

}  // namespace
}  // namespace scibrowse
