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

#include "scibrowse/discourse_blocks.h"

#include <algorithm>
#include <tuple>

#include "scibrowse/article_json.h"

namespace scibrowse {

std::string_view Name(BlockSubtype v) {
  return v == BlockSubtype::kStandard ? "standard" : "technique_development";
}

std::vector<Span> BlockSpans(const ActivityBlock& ab) {
  std::vector<Span> spans{ab.goal_span};
  spans.insert(spans.end(), ab.result_spans.begin(), ab.result_spans.end());
  return spans;
}

void BlockSet::Validate(const Article& article, const KnowledgeBase& kb,
                        const ActivityBlock& ab) const {
  if (ab.method_flow_ids.empty() && ab.result_spans.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "an activity block needs method flows or result spans");
  }
  for (const auto& span : BlockSpans(ab)) {
    if (!SpanResolves(article, span)) {
      throw Error(ErrorCode::kUnknownSpan,
                  "span [" + std::to_string(span.start) + "," +
                      std::to_string(span.end) + ") in '" + span.block_id +
                      "' does not resolve");
    }
  }
  for (const auto& f : ab.method_flow_ids) {
    const Flow* flow = kb.FindFlow(f);
    if (flow == nullptr) {
      throw Error(ErrorCode::kUnknownFlow, "unknown flow '" + f + "'");
    }
    if (flow->kind != FlowKind::kMethodFlow) {
      throw Error(ErrorCode::kNotMethodFlow, "'" + f + "' is a conceptual model");
    }
  }
}

std::string BlockSet::NewId(std::string_view prefix, const KnowledgeBase& kb) {
  for (;;) {
    std::string id = std::string(prefix) + "-" + std::to_string(next_sequence_++);
    if (!Contains(id) && !kb.KindOf(id)) return id;
  }
}

bool BlockSet::Contains(const std::string& id) const {
  return activity_blocks_.contains(id) || rq_blocks_.contains(id);
}

const ActivityBlock* BlockSet::FindActivity(const std::string& id) const {
  if (auto it = activity_blocks_.find(id); it != activity_blocks_.end()) {
    return &it->second;
  }
  if (auto it = rq_blocks_.find(id); it != rq_blocks_.end()) {
    return &it->second.activity_block;
  }
  return nullptr;
}

const ActivityBlock& BlockSet::DefineActivityBlock(const Article& article,
                                                   const KnowledgeBase& kb,
                                                   ActivityBlock ab) {
  if (!ab.id.empty() && (Contains(ab.id) || kb.KindOf(ab.id))) {
    throw Error(ErrorCode::kDuplicateId, "id '" + ab.id + "' is already used");
  }
  Validate(article, kb, ab);
  if (ab.id.empty()) ab.id = NewId("ab", kb);
  std::string id = ab.id;
  return activity_blocks_.emplace(id, std::move(ab)).first->second;
}

const RqBlock& BlockSet::DefineRqBlock(const Article& article,
                                       KnowledgeBase& kb, RqBlock rqb) {
  if (!rqb.id.empty() && (Contains(rqb.id) || kb.KindOf(rqb.id))) {
    throw Error(ErrorCode::kDuplicateId, "id '" + rqb.id + "' is already used");
  }
  if (!kb.research_questions().contains(rqb.rq_id)) {
    throw Error(ErrorCode::kUnknownRQ, "unknown question '" + rqb.rq_id + "'");
  }
  Validate(article, kb, rqb.activity_block);
  if (rqb.answer_span && !SpanResolves(article, *rqb.answer_span)) {
    throw Error(ErrorCode::kUnknownSpan, "answer span does not resolve");
  }
  for (const auto& ref : rqb.literature_refs) {
    if (FindReference(article, ref) == nullptr) {
      throw Error(ErrorCode::kUnknownReference, "unknown reference '" + ref + "'");
    }
  }
  if (rqb.id.empty()) rqb.id = NewId("rqb", kb);
  rqb.activity_block.id = rqb.id;
  kb.SetRqAnswer(rqb.rq_id, RqAnswer{rqb.answer_summary, rqb.id});
  std::string id = rqb.id;
  return rq_blocks_.emplace(id, std::move(rqb)).first->second;
}

std::vector<BlockOutline> BlockSet::ListBlocks(const Article& article) const {
  std::vector<BlockOutline> out;
  for (const auto& [id, ab] : activity_blocks_) {
    out.push_back({id, TocEntryKind::kActivityBlock, ab.goal_label, ab.goal_span,
                   BlockSpans(ab)});
  }
  for (const auto& [id, rqb] : rq_blocks_) {
    BlockOutline o{id, TocEntryKind::kRqBlock, rqb.activity_block.goal_label,
                   rqb.activity_block.goal_span, BlockSpans(rqb.activity_block)};
    if (rqb.answer_span) o.spans.push_back(*rqb.answer_span);
    out.push_back(std::move(o));
  }
  // Unresolvable goals (possible only in hand-edited stores) sort last.
  auto key = [&](const BlockOutline& o) {
    return std::make_tuple(
        BlockPosition(article, o.goal_span.block_id).value_or(SIZE_MAX),
        o.goal_span.start, o.goal_span.end);
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const BlockOutline& a, const BlockOutline& b) {
                     auto ka = key(a), kb = key(b);
                     if (ka != kb) return ka < kb;
                     return a.id < b.id;
                   });
  return out;
}

// ---- JSON

namespace {

Json SpanList(const std::vector<Span>& spans) {
  Json arr = Json::array();
  for (const auto& s : spans) arr.push_back(SpanToJson(s));
  return arr;
}

std::vector<Span> SpansFromJson(const Json& obj, std::string_view key,
                                std::string_view where) {
  std::vector<Span> out;
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return out;
  const std::string w = std::string(where) + "/" + std::string(key);
  if (!it->is_array()) {
    throw Error(ErrorCode::kCorruptStore, w + ": expected array");
  }
  for (size_t i = 0; i < it->size(); ++i) {
    out.push_back(SpanFromJson((*it)[i], w + "/" + std::to_string(i)));
  }
  return out;
}

std::vector<std::string> Strings(const Json& obj, std::string_view key,
                                 std::string_view where) {
  std::vector<std::string> out;
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return out;
  const std::string w = std::string(where) + "/" + std::string(key);
  if (!it->is_array()) {
    throw Error(ErrorCode::kCorruptStore, w + ": expected array");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kCorruptStore, w + ": expected string");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Json ToJson(const ActivityBlock& ab) {
  Json j = Json::object();
  j["id"] = ab.id;
  j["goal_label"] = ab.goal_label;
  j["goal_span"] = SpanToJson(ab.goal_span);
  Json flows = Json::array();
  for (const auto& f : ab.method_flow_ids) flows.push_back(f);
  j["method_flow_ids"] = std::move(flows);
  j["result_spans"] = SpanList(ab.result_spans);
  j["subtype"] = std::string(Name(ab.subtype));
  return j;
}

Json ToJson(const RqBlock& rqb) {
  Json j = Json::object();
  j["id"] = rqb.id;
  Json ab = ToJson(rqb.activity_block);
  ab.erase("id");
  j["activity_block"] = std::move(ab);
  j["rq_id"] = rqb.rq_id;
  j["answer_span"] = rqb.answer_span ? SpanToJson(*rqb.answer_span) : Json(nullptr);
  j["answer_summary"] = rqb.answer_summary;
  Json refs = Json::array();
  for (const auto& r : rqb.literature_refs) refs.push_back(r);
  j["literature_refs"] = std::move(refs);
  return j;
}

ActivityBlock ActivityBlockFromJson(const Json& j, std::string_view where) {
  ActivityBlock ab;
  ab.id = OptionalString(j, "id", where);
  ab.goal_label = OptionalString(j, "goal_label", where);
  ab.goal_span = SpanFromJson(RequireField(j, "goal_span", where),
                              std::string(where) + "/goal_span");
  ab.method_flow_ids = Strings(j, "method_flow_ids", where);
  ab.result_spans = SpansFromJson(j, "result_spans", where);
  const std::string subtype = OptionalString(j, "subtype", where);
  if (subtype.empty() || subtype == "standard") {
    ab.subtype = BlockSubtype::kStandard;
  } else if (subtype == "technique_development") {
    ab.subtype = BlockSubtype::kTechniqueDevelopment;
  } else {
    throw Error(ErrorCode::kCorruptStore,
                std::string(where) + "/subtype: unknown value '" + subtype + "'");
  }
  return ab;
}

RqBlock RqBlockFromJson(const Json& j, std::string_view where) {
  RqBlock rqb;
  rqb.id = OptionalString(j, "id", where);
  rqb.activity_block = ActivityBlockFromJson(
      RequireField(j, "activity_block", where),
      std::string(where) + "/activity_block");
  rqb.activity_block.id = rqb.id;
  rqb.rq_id = RequireString(j, "rq_id", where);
  auto span = j.find("answer_span");
  if (span != j.end() && !span->is_null()) {
    rqb.answer_span = SpanFromJson(*span, std::string(where) + "/answer_span");
  }
  rqb.answer_summary = OptionalString(j, "answer_summary", where);
  rqb.literature_refs = Strings(j, "literature_refs", where);
  return rqb;
}

Json BlockSet::ToJson() const {
  Json j = Json::object();
  j["next_sequence"] = next_sequence_;
  Json abs = Json::array();
  for (const auto& [id, ab] : activity_blocks_) abs.push_back(scibrowse::ToJson(ab));
  j["activity_blocks"] = std::move(abs);
  Json rqbs = Json::array();
  for (const auto& [id, rqb] : rq_blocks_) rqbs.push_back(scibrowse::ToJson(rqb));
  j["rq_blocks"] = std::move(rqbs);
  return j;
}

BlockSet BlockSet::FromJson(const Json& j) {
  const std::string where = "blocks";
  BlockSet set;
  set.next_sequence_ = static_cast<uint64_t>(RequireInt(j, "next_sequence", where));
  const Json& abs = RequireArray(j, "activity_blocks", where);
  for (size_t i = 0; i < abs.size(); ++i) {
    const std::string w = where + "/activity_blocks/" + std::to_string(i);
    ActivityBlock ab = ActivityBlockFromJson(abs[i], w);
    if (ab.id.empty() || set.Contains(ab.id)) {
      throw Error(ErrorCode::kCorruptStore, w + ": missing or duplicate id");
    }
    std::string id = ab.id;
    set.activity_blocks_.emplace(std::move(id), std::move(ab));
  }
  const Json& rqbs = RequireArray(j, "rq_blocks", where);
  for (size_t i = 0; i < rqbs.size(); ++i) {
    const std::string w = where + "/rq_blocks/" + std::to_string(i);
    RqBlock rqb = RqBlockFromJson(rqbs[i], w);
    if (rqb.id.empty() || set.Contains(rqb.id)) {
      throw Error(ErrorCode::kCorruptStore, w + ": missing or duplicate id");
    }
    std::string id = rqb.id;
    set.rq_blocks_.emplace(std::move(id), std::move(rqb));
  }
  return set;
}

}  // namespace scibrowse
