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

// End-to-end checks shared by the property tests and the acceptance binary.
// Each returns a verdict plus a one-line detail; failures list the first
// offending case.

#ifndef SCIBROWSE_TESTS_CRITERIA_H_
#define SCIBROWSE_TESTS_CRITERIA_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scibrowse/concept_kb.h"

namespace scibrowse::testing {

struct Verdict {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Pinned sizes and seeds.
inline constexpr int kGeneratedArticles = 200;
inline constexpr int kKbMutations = 1000;
inline constexpr int kMaxDeterminantFlows = 50;
inline constexpr int kServiceGets = 100;
inline constexpr uint32_t kSeed = 20260415;

Verdict CheckPlosIngest(const std::vector<std::string>& fixtures);
Verdict CheckGroupedSplitting(int articles, uint32_t seed);
Verdict CheckReferenceToggle(int articles, uint32_t seed);
Verdict CheckKbInvariants(int mutations, uint32_t seed);
Verdict CheckDeterminantsBruteForce(int max_flows, uint32_t seed);
Verdict CheckMeshMinimality(int meshes, uint32_t seed);
Verdict CheckFig3Golden(const std::string& golden_path);
Verdict CheckAnchorScenario();
Verdict CheckPersistence();
Verdict CheckServiceReadOnly(int gets);

// Random knowledgebase built from `steps` successful random mutations.
// Failed attempts are checked to leave the store unchanged; any violation
// is reported through `verdict`.
KnowledgeBase RandomKb(std::mt19937& rng, int steps, int max_flows,
                       Verdict& verdict);

// Full-traversal cycle check over parent_class_ids or part_of_ids,
// independent of the store's own checks.
bool AcyclicByTraversal(const KnowledgeBase& kb, Relation relation);

}  // namespace scibrowse::testing

#endif  // SCIBROWSE_TESTS_CRITERIA_H_
