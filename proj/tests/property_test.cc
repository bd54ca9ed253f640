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

#include "gtest/gtest.h"
#include "criteria.h"
#include "scibrowse/ingest.h"
#include "test_support.h"

namespace scibrowse::testing {
namespace {

// Different seeds from the acceptance run, so the two cover more ground.
constexpr uint32_t kPropertySeed = 7;

TEST(PropertyTest, GroupedCitationsSplitPreservingPairs) {
  Verdict v = CheckGroupedSplitting(kGeneratedArticles, kPropertySeed);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(PropertyTest, ReferenceOrdersToggleLosslessly) {
  Verdict v = CheckReferenceToggle(kGeneratedArticles, kPropertySeed + 1);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(PropertyTest, KnowledgebaseInvariantsHoldUnderRandomMutation) {
  for (uint32_t seed : {kPropertySeed, kPropertySeed + 2, kPropertySeed + 3}) {
    Verdict v = CheckKbInvariants(kKbMutations, seed);
    EXPECT_TRUE(v.pass) << "seed " << seed << ": " << v.detail;
  }
}

TEST(PropertyTest, DeterminantsMatchBruteForce) {
  Verdict v = CheckDeterminantsBruteForce(kMaxDeterminantFlows, kPropertySeed);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(PropertyTest, KnotsAreInclusionMinimal) {
  Verdict v = CheckMeshMinimality(500, kPropertySeed);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(PropertyTest, PlantedCycleIsRejectedOnLoad) {
  Verdict v;
  std::mt19937 rng(kPropertySeed);
  KnowledgeBase kb = RandomKb(rng, 50, 5, v);
  ASSERT_TRUE(v.pass) << v.detail;
  ASSERT_TRUE(AcyclicByTraversal(kb, Relation::kTypeOf));
  Json j = kb.ToJson();
  ASSERT_FALSE(j["classes"].empty());
  j["classes"][0]["parent_class_ids"].push_back(j["classes"][0]["id"]);
  try {
    KnowledgeBase::FromJson(j);
    ADD_FAILURE() << "cycle accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptStore);
  }
}

TEST(PropertyTest, ParseIsDeterministicOnGeneratedArticles) {
  std::mt19937 rng(kPropertySeed);
  for (int i = 0; i < 50; ++i) {
    GeneratedArticle g = GenerateArticle(rng);
    EXPECT_EQ(Ingest({"gen", g.xml}).article, Ingest({"gen", g.xml}).article);
  }
}

}  // namespace
}  // namespace scibrowse::testing
