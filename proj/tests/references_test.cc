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

#include "scibrowse/references.h"

#include "gtest/gtest.h"
#include "test_support.h"

namespace scibrowse {
namespace {

using testing::JatsBuilder;
using testing::Xref;

// Three refs cited in text order 3, 1, 2 (or as given).
Article Cited(const std::vector<int>& order,
              const std::vector<std::string>& surnames = {"Zhai", "Allen",
                                                          "Gosby"}) {
  std::string para = "text";
  for (int n : order) {
    para += " " + Xref("B" + std::to_string(n), "[" + std::to_string(n) + "]");
  }
  JatsBuilder jb;
  jb.BeginSection("Intro").Paragraph(para);
  for (size_t i = 0; i < surnames.size(); ++i) {
    jb.Ref({"B" + std::to_string(i + 1), surnames[i], "A", "2000", "t"});
  }
  return testing::IngestXmlString(jb.Build());
}

std::vector<int> Displays(const Article& a) {
  std::vector<int> out;
  ForEachBlock(a, [&](const ContentBlock& b) {
    for (const auto& m : b.marks) out.push_back(m.display_number);
  });
  return out;
}

TEST(OrderByAppearanceTest, FirstMention) {
  EXPECT_EQ(OrderByAppearance(Cited({3, 1, 2})).sequence,
            (std::vector<std::string>{"B3", "B1", "B2"}));
  EXPECT_EQ(OrderByAppearance(Cited({1, 2, 3})).sequence,
            (std::vector<std::string>{"B1", "B2", "B3"}));
  // Uncited ref 2 goes last.
  EXPECT_EQ(OrderByAppearance(Cited({3, 1, 3})).sequence,
            (std::vector<std::string>{"B3", "B1", "B2"}));
}

TEST(OrderAlphabeticalTest, SurnameThenYear) {
  EXPECT_EQ(OrderAlphabetical(Cited({1})).sequence,
            (std::vector<std::string>{"B2", "B3", "B1"}));

  JatsBuilder jb;
  jb.Ref({"B1", "Allen", "A", "2007", "x"})
      .Ref({"B2", "Allen", "A", "2005", "y"})
      .Ref({"B3", "", "", "2001", "Anonymous report"});
  ReferenceOrder o = OrderAlphabetical(testing::IngestXmlString(jb.Build()));
  EXPECT_EQ(o.sequence, (std::vector<std::string>{"B2", "B1", "B3"}));
  EXPECT_EQ(o.flagged, std::vector<std::string>{"B3"});

  Article single = Cited({1}, {"Solo"});
  EXPECT_EQ(OrderAlphabetical(single).sequence, std::vector<std::string>{"B1"});
}

TEST(OrderAlphabeticalTest, CaseFolded) {
  ReferenceOrder o = OrderAlphabetical(Cited({1}, {"zhai", "ALLEN", "gosby"}));
  EXPECT_EQ(o.sequence, (std::vector<std::string>{"B2", "B3", "B1"}));
}

TEST(RenumberTest, ReadsOffPermutation) {
  Article a = Cited({3, 1, 2});
  RenumberResult r = Renumber(a, OrderByAppearance(a));
  EXPECT_EQ(Displays(r.article), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(r.map.pairs.at(3), 1);
  EXPECT_TRUE(r.map.IsBijection(3));
  // Target identity unchanged.
  EXPECT_EQ(testing::MarkPairs(r.article), testing::MarkPairs(a));
}

TEST(RenumberTest, IdentityAndRoundTrip) {
  Article a = Cited({3, 1, 2});
  RenumberResult same = Renumber(a, OrderOriginal(a));
  EXPECT_EQ(same.article, a);
  RenumberResult alpha = Renumber(a, OrderAlphabetical(a));
  RenumberResult back = Renumber(alpha.article, OrderOriginal(a));
  EXPECT_EQ(Displays(back.article), Displays(a));
}

TEST(RenumberTest, IncompleteOrderRejected) {
  Article a = Cited({3, 1, 2});
  ReferenceOrder bad = OrderOriginal(a);
  bad.sequence.pop_back();
  try {
    Renumber(a, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteOrder);
  }
  bad = OrderOriginal(a);
  bad.sequence.back() = bad.sequence.front();
  EXPECT_THROW(Renumber(a, bad), Error);
}

TEST(RenumberMapTest, Bijection) {
  RenumberMap m;
  m.pairs = {{1, 2}, {2, 1}};
  EXPECT_TRUE(m.IsBijection(2));
  EXPECT_FALSE(m.IsBijection(3));
  m.pairs = {{1, 1}, {2, 1}};
  EXPECT_FALSE(m.IsBijection(2));
  EXPECT_TRUE(RenumberMap{}.IsBijection(0));
}

TEST(RenumberTest, NoReferencesIsNoOp) {
  Article a = testing::IngestXmlString(
      JatsBuilder().BeginSection("Intro").Paragraph("none").Build());
  RenumberResult r = Renumber(a, OrderAlphabetical(a));
  EXPECT_EQ(r.article, a);
  EXPECT_TRUE(r.map.IsBijection(0));
}

TEST(ReferenceOrderJsonTest, CarriesMap) {
  Article a = Cited({3, 1, 2});
  ReferenceOrder o = OrderByAppearance(a);
  Json j = ReferenceOrderToJson(a, o, Renumber(a, o).map);
  EXPECT_EQ(j["order"], "appearance");
  EXPECT_EQ(j["references"].size(), 3u);
  EXPECT_TRUE(j.contains("renumber_map"));
  EXPECT_EQ(ParseOrderMode("alphabetical"), OrderMode::kAlphabetical);
  EXPECT_EQ(ParseOrderMode("random"), std::nullopt);
}

}  // namespace
}  // namespace scibrowse
