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

// Activity blocks and research-question blocks: hand-authored overlays that
// tie a stated goal, the method flows used and the reported results
// together, wherever in the article those spans lie.

#ifndef SCIBROWSE_DISCOURSE_BLOCKS_H_
#define SCIBROWSE_DISCOURSE_BLOCKS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"
#include "scibrowse/concept_kb.h"
#include "scibrowse/navigation.h"

namespace scibrowse {

enum class BlockSubtype { kStandard, kTechniqueDevelopment };

std::string_view Name(BlockSubtype v);

struct ActivityBlock {
  std::string id;
  std::string goal_label;
  Span goal_span;
  std::vector<std::string> method_flow_ids;
  std::vector<Span> result_spans;
  BlockSubtype subtype = BlockSubtype::kStandard;

  bool operator==(const ActivityBlock&) const = default;
};

struct RqBlock {
  std::string id;
  // Shares the RQ block's id.
  ActivityBlock activity_block;
  std::string rq_id;
  std::optional<Span> answer_span;
  std::string answer_summary;
  std::vector<std::string> literature_refs;

  bool operator==(const RqBlock&) const = default;
};

// Every span of an activity block, goal first.
std::vector<Span> BlockSpans(const ActivityBlock& ab);

class BlockSet {
 public:
  // Throws kUnknownSpan, kUnknownFlow, kNotMethodFlow, kInvalidArgument (no
  // flows and no results), kDuplicateId.
  const ActivityBlock& DefineActivityBlock(const Article& article,
                                           const KnowledgeBase& kb,
                                           ActivityBlock ab);

  // Also records the answer on the research question. Throws kUnknownRQ,
  // kUnknownReference and the activity-block errors.
  const RqBlock& DefineRqBlock(const Article& article, KnowledgeBase& kb,
                               RqBlock rqb);

  // All blocks ordered by goal position in the document, then goal start,
  // then id.
  std::vector<BlockOutline> ListBlocks(const Article& article) const;

  // Activity block by id, including the ones embedded in RQ blocks.
  const ActivityBlock* FindActivity(const std::string& id) const;
  bool Contains(const std::string& id) const;

  const std::map<std::string, ActivityBlock>& activity_blocks() const {
    return activity_blocks_;
  }
  const std::map<std::string, RqBlock>& rq_blocks() const { return rq_blocks_; }

  Json ToJson() const;
  // Throws kCorruptStore.
  static BlockSet FromJson(const Json& j);

  bool operator==(const BlockSet&) const = default;

 private:
  void Validate(const Article& article, const KnowledgeBase& kb,
                const ActivityBlock& ab) const;
  std::string NewId(std::string_view prefix, const KnowledgeBase& kb);

  std::map<std::string, ActivityBlock> activity_blocks_;
  std::map<std::string, RqBlock> rq_blocks_;
  uint64_t next_sequence_ = 1;
};

Json ToJson(const ActivityBlock& ab);
Json ToJson(const RqBlock& rqb);
ActivityBlock ActivityBlockFromJson(const Json& j, std::string_view where);
RqBlock RqBlockFromJson(const Json& j, std::string_view where);

}  // namespace scibrowse

#endif  // SCIBROWSE_DISCOURSE_BLOCKS_H_
