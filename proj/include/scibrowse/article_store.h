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

// The article-scoped store (document, knowledgebase, blocks) and the JSON
// command interface used by the CLI, the HTTP service and the command log.
//
// A command is an object with an "op" field plus the op's payload:
//
//   add_class              EntityClass fields
//   add_relation           relation (type_of|part_of), child, parent
//   instantiate            EntityInstance fields
//   add_system             SystemEntity fields
//   define_flow            Flow fields
//   instantiate_flow       flow_id, id?, executed_at?
//   build_mesh             id?, flow_ids, edges
//   define_rq              ResearchQuestion fields
//   define_hypothesis      Hypothesis fields
//   add_instrument         Instrument fields
//   attach_dataset         flow_id, id?, instruments (ids or objects),
//                          datapoints, reliability_note, validity_note
//   add_comment            Comment fields
//   define_activity_block  ActivityBlock fields
//   define_rq_block        RqBlock fields
//
// Payload field names match the stored JSON.

#ifndef SCIBROWSE_ARTICLE_STORE_H_
#define SCIBROWSE_ARTICLE_STORE_H_

#include <functional>
#include <optional>
#include <string>

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"
#include "scibrowse/concept_kb.h"
#include "scibrowse/discourse_blocks.h"

namespace scibrowse {

struct ArticleStore {
  Article article;
  KnowledgeBase kb;
  BlockSet blocks;

  bool operator==(const ArticleStore& o) const {
    return article == o.article && kb == o.kb && blocks == o.blocks;
  }
};

// Looks up an instrument registered outside the target store.
using InstrumentLookup =
    std::function<std::optional<Instrument>(const std::string& id)>;

// Applies one command. `article` is null for the shared store, which then
// rejects block commands and span comments. Returns
// {"op", "id", "result", "warnings"}. Throws the op's errors, or
// kInvalidArgument for an unknown op and kCorruptStore for a malformed
// payload; the stores are unchanged on error.
Json ApplyKbCommand(const Article* article, KnowledgeBase& kb,
                    BlockSet* blocks, const Json& command,
                    const InstrumentLookup& instruments = nullptr);

inline Json ApplyKbCommand(ArticleStore& store, const Json& command,
                           const InstrumentLookup& instruments = nullptr) {
  return ApplyKbCommand(&store.article, store.kb, &store.blocks, command,
                        instruments);
}

}  // namespace scibrowse

#endif  // SCIBROWSE_ARTICLE_STORE_H_
